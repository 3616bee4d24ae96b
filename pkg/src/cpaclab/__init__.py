"""Computable PAC learning on hypothesis classes over the naturals."""

__version__ = "0.1.0"
