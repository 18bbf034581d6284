"""Symbolic and numerical toolkit for two-dimensional quantum superintegrable
systems with a second-order and a higher-order integral of motion."""

__version__ = "0.1.0"
