"""Exact Hodge theory and canonical deformations on presented double complexes."""

__version__ = "0.1.0"
