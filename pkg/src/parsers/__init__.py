"""Parsers for graph files, statement files and ordering overrides."""
