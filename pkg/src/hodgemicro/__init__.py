"""Exact verification engine for monodromic perverse sheaves, plumbing
microsheaf towers and the quiver algebras Koszul dual to them."""

__version__ = "0.1.0"
