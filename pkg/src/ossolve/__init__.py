"""Asymptotic eigenvalues and eigenfunctions of the Orr-Sommerfeld equation
in the short-wave and long-wave limits, with numerical cross-checks."""

__version__ = "0.1.0"
