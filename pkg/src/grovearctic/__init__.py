"""Groves, cube recurrences and arctic curves from periodic conductances."""

__version__ = "0.1.0"
