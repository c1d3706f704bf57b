"""Numerical oracles."""
