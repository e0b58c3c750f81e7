"""Gradings of linear categories, smash products and fundamental groups."""

__version__ = "0.1.0"
