"""Brute-force Slater-determinant verification of the closed-form averages."""
