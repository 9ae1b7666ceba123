"""Multigraded elimination matrices and Sylvester forms over exact fields."""

__version__ = "0.1.0"
