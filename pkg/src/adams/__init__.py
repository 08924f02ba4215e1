"""Computational engine for the mod-2 Steenrod algebra, its secondary
operations, and the d2 differential of the Adams spectral sequence."""
