"""Finite uniform locales, their completions, and exact arithmetic on the reals and p-adics."""

__version__ = "0.1.0"
