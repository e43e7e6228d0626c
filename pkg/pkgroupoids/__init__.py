"""Groupoids of transformations acting on poly-Klumpenhouwer networks."""

__version__ = "1.0.0"
