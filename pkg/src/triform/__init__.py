"""Categorial, dependency and phrase-structure analyses of sentences whose
constituents may be discontinuous, with conversions between the three."""

__version__ = "0.1.0"
