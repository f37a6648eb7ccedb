"""Level generation: seeded, pure, and serializable."""

from .coinrun import generate_coinrun, generate_platforms, sample_difficulty
from .grid import CoinRunLevel, MonsterSpec, PlatformsLevel, TileGrid
from .maze import MazeLevel, generate_maze, shortest_path_length
from .schema import deserialize_level, serialize_level

__all__ = [
    "CoinRunLevel",
    "MazeLevel",
    "MonsterSpec",
    "PlatformsLevel",
    "TileGrid",
    "deserialize_level",
    "generate_coinrun",
    "generate_maze",
    "generate_platforms",
    "sample_difficulty",
    "serialize_level",
    "shortest_path_length",
]


def generate(game: str, seed: int):
    """Generate a level for any of the three games."""
    if game == "coinrun":
        return generate_coinrun(seed)
    if game == "platforms":
        return generate_platforms(seed)
    if game == "mazes":
        return generate_maze(seed)
    raise ValueError(f"unknown game: {game!r}")
