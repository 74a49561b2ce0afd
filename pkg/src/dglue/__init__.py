"""Gluing calculus for diffeological vector pseudo-bundles over lines."""

from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
