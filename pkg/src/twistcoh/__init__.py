"""Exact tools for twisted cohomology of hypersurface complements."""

__version__ = "0.1.0"
