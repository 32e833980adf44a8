"""Offline rendering of obstacle-control run exports."""

__version__ = "0.1.0"
