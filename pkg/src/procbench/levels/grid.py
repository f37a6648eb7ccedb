"""Immutable level data types for the platformer games."""

from __future__ import annotations

from dataclasses import dataclass

from ..tiles import Tile

Coord = tuple[int, int]


@dataclass(frozen=True)
class TileGrid:
    """Row-major tile grid. Row 0 is the BOTTOM row (y grows upward)."""

    width: int
    height: int
    cells: bytes  # len == width * height, values are Tile codes

    def __post_init__(self):
        if len(self.cells) != self.width * self.height:
            raise ValueError("cell count does not match width * height")

    def get(self, x: int, y: int) -> int:
        return self.cells[y * self.width + x]

    def count(self, kind: Tile) -> int:
        return self.cells.count(kind)


@dataclass(frozen=True)
class MonsterSpec:
    """A patrolling monster on the ground row ``y``, walking between the
    centers of tile columns ``x0`` and ``x1`` as a triangular wave.

    Speed and phase are stored in integer fixed-point units (1/20 tile)
    so simulation and serialization stay exact.
    """

    x0: int
    x1: int
    y: int
    speed_units: int          # units per step, > 0
    phase_units: int          # in [0, 2 * path_units)

    def __post_init__(self):
        if self.x1 <= self.x0:
            raise ValueError("patrol end must lie right of patrol start")
        if self.speed_units <= 0:
            raise ValueError("monster speed must be positive")
        if not 0 <= self.phase_units < 2 * self.path_units:
            raise ValueError("initial phase out of range")

    @property
    def path_units(self) -> int:
        return (self.x1 - self.x0) * 20

    @property
    def patrol_start(self) -> Coord:
        return (self.x0, self.y)

    @property
    def patrol_end(self) -> Coord:
        return (self.x1, self.y)

    @property
    def speed(self) -> float:
        """Patrol speed in tiles per step."""
        return self.speed_units / 20.0

    @property
    def initial_phase(self) -> float:
        """Phase fraction in [0, 1): 0 at patrol start, 0.5 at patrol end."""
        return self.phase_units / (2 * self.path_units)


@dataclass(frozen=True)
class CoinRunLevel:
    """Single-coin run-right level, fully determined by its seed."""

    seed: int
    difficulty: int
    grid: TileGrid
    agent_spawn: Coord
    coin_positions: tuple[Coord, ...]
    monsters: tuple[MonsterSpec, ...]
    palette_hue: int

    game = "coinrun"


@dataclass(frozen=True)
class PlatformsLevel:
    """Multi-coin level with floating platforms; no difficulty knob."""

    seed: int
    grid: TileGrid
    agent_spawn: Coord
    coin_positions: tuple[Coord, ...]
    monsters: tuple[MonsterSpec, ...]
    palette_hue: int

    game = "platforms"

    @property
    def coin_count(self) -> int:
        return len(self.coin_positions)
