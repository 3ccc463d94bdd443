"""Angular-momentum coupling coefficients."""
