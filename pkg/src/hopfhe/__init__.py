"""Verification and solver laboratory for alpha-Hermitian-Einstein metrics on the Hopf surface."""

__version__ = "0.1.0"
