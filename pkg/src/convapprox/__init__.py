"""Best uniform trigonometric approximation of periodic convolution classes."""

from ._trigsum import BACKEND

__all__ = ["BACKEND", "__version__"]

__version__ = "0.1.0"
