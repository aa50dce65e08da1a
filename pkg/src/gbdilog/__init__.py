"""Numerics and exact algebra for the non-compact quantum dilogarithm G_b."""

__version__ = "0.1.0"
