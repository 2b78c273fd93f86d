"""Exact affine Weyl group combinatorics, convex PBW orders, and semi-infinite Tor tables."""

__version__ = "0.1.0"
