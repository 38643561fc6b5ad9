"""Lie-theoretic toolkit for projective parabolic geometries."""

__version__ = "0.1.0"
