"""Nilpotent covers and non-nilpotent sets of rank-one groups of Lie type."""

__version__ = "0.1.0"
