"""Analyzers: pairwise properties, separation and equivalence checks."""
