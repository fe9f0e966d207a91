"""Minimal vectors of a 128-dimensional Mordell-Weil lattice over GF(2^12)(t)."""

__version__ = "0.1.0"
