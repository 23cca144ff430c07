"""Exact symbolic checks for the queer-type twisted Yangian of A(n-1,n-1)."""

__version__ = "0.1.0"
