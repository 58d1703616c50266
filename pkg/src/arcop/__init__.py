"""Open/closed string topology operations from arc graphs and Frobenius brane systems."""

__version__ = "0.1.0"
