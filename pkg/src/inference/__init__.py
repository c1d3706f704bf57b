"""Graphoid inference package."""
