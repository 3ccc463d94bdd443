"""Shell Averages - exact angular-momentum algebra for nl^N configurations."""
__version__ = "0.1.0"
