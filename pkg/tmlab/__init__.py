"""Thue-Morse renormalization and thermodynamic formalism lab."""

__version__ = "1.0.0"
