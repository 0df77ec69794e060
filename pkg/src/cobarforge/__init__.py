"""Cobar complexes, Ext and descent spectral sequences for the Gamma_1(3) Hopf algebroid with 2-torsion coefficients."""
from __future__ import annotations

__version__ = "0.1.0"
