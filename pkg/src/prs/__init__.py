"""Exact Poisson cohomology of ruled surfaces over an elliptic curve."""

__version__ = "0.1.0"
