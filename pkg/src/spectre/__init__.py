"""Verification toolkit for commutative spectral geometry."""

__version__ = "0.1.0"
