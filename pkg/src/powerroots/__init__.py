"""k-th roots and power-map images in solvable triangular matrix groups."""

__version__ = "0.1.0"
