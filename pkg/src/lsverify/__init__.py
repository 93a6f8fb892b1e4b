"""Numerical verification of spectral inequalities on thick sets."""
__version__ = "0.1.0"
