"""Exact verification engine for nilpotent orbits of orthogonal type."""

__version__ = "0.1.0"
