"""Exact resolution and inner-geometry invariants of superisolated surface
singularities."""

__version__ = "0.1.0"
