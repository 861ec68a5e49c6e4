"""conemetric - existence, construction and verification of CSC-1 reducible cone metrics."""

__version__ = "0.1.0"
