"""Categorical data mining for student dropout analysis."""

from .errors import MiningError

__version__ = "0.1.0"
__all__ = ["MiningError", "__version__"]
