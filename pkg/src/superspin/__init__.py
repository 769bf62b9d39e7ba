"""Exact operator-product algebra for free fermions and bosonic ghosts."""

__version__ = "0.1.0"
