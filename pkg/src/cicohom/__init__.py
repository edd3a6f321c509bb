"""Exact homological algebra over exterior algebras and Artinian complete intersections."""

__version__ = "0.1.0"
