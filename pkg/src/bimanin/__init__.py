"""Exact computation of order-1 and order-2 Manin relation spaces."""

__version__ = "0.1.0"
