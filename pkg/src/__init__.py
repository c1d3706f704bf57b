"""Regmark: regression graphs, pairwise Markov properties and graphoid inference."""
