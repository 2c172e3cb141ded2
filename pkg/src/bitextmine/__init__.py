"""Unsupervised bitext mining from multilingual websites."""

__version__ = "0.1.0"
