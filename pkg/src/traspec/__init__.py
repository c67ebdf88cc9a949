"""Tridiagonal-representation spectra of a spherical oscillator in external fields."""

__version__ = "0.1.0"
