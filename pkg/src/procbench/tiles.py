"""Tile and cell vocabulary shared by level grids, physics, and rendering."""

from enum import IntEnum


class Tile(IntEnum):
    """Platformer tile kinds. Values are the grid byte codes."""

    EMPTY = 0
    GROUND = 1
    WALL = 2
    SAW = 3
    LAVA = 4
    COIN = 5
    CRATE = 6


class Cell(IntEnum):
    """Maze cell kinds."""

    WALL = 0
    EMPTY = 1
    GOAL = 2


def _lut(kinds) -> bytes:
    table = bytearray(256)
    for k in kinds:
        table[k] = 1
    return bytes(table)


# translate() tables mapping tile codes to 0/1 flags
SOLID_LUT = _lut([Tile.GROUND, Tile.WALL])
ONEWAY_LUT = _lut([Tile.CRATE])
HAZARD_LUT = _lut([Tile.SAW, Tile.LAVA])
