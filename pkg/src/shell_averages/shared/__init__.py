"""Shared utilities for all shell_averages modules."""
