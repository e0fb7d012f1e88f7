"""Exact implicitization of ambirational statistical models."""

__version__ = "0.1.0"
