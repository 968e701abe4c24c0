"""Toeplitz Delta: Toeplitz determinants with a delta-function singularity in the symbol."""

__version__ = "0.1.0"
