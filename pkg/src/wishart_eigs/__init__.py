"""Eigenvalue sampling for Wishart / beta-Laguerre ensembles."""

__version__ = "0.1.0"
