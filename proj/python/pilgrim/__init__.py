"""Pilgrim process: simulation, densities and exact partition laws."""

from ._pilgrim import *  # noqa: F401,F403
from ._pilgrim import ModelParams

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
