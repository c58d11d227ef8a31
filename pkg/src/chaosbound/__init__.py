"""Boundary of chaos for plateau maps of expanding double covers."""

__version__ = "0.1.0"
