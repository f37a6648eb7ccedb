"""Step-wise simulators for the platformer and maze games."""

from . import maze, platformer

__all__ = ["maze", "platformer"]
