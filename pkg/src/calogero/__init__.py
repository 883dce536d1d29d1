"""Exact verification kernel and numerical transport engine for the
Dunkl-operator structure of the rational Calogero model."""

__version__ = "0.1.0"
