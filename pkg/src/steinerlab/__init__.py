"""Steiner symmetrization engine for planar convex bodies."""

__version__ = "0.1.0"
