"""Numerical workbench for warped-product curvature on hyperbolic hyperplane complements."""

__version__ = "0.1.0"
