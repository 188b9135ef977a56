"""Plunge-region eigenvalue profiles for time-frequency localization operators."""

__version__ = "0.1.0"
