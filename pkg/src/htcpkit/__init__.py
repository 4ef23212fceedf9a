"""Exact computations with twin cotorsion pairs, hearts and localizations."""

__version__ = "0.1.0"
