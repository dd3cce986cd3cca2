"""Exact arithmetic for sigma-conjugacy invariants over F_q((z))."""

__version__ = "0.1.0"
