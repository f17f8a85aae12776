"""Seed lexicons from identical strings and romanization, plus Procrustes self-learning."""

__version__ = "0.1.0"
