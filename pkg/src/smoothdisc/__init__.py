"""Smoothed discrepancy of Kronecker sequences and unimodular lattices."""

__version__ = "0.1.0"
