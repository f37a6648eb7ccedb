"""Shared helpers for handcrafting small platformer levels."""

from procbench.levels.grid import CoinRunLevel, PlatformsLevel, TileGrid
from procbench.tiles import Tile

HEIGHT = 16


def build_grid(width, columns):
    """columns: {col: list of (row, Tile)} sparse overrides on top of a
    fully EMPTY grid."""
    cells = bytearray(width * HEIGHT)
    for c, entries in columns.items():
        for r, t in entries:
            cells[r * width + c] = t
    return TileGrid(width, HEIGHT, bytes(cells))


def flat_grid(width, floor=2, gaps=(), saws=(), crates=()):
    """Flat ground of the given floor height with optional gap columns,
    saw tiles, and (col, height) crate stacks."""
    cells = bytearray(width * HEIGHT)
    for c in range(width):
        if c in gaps:
            continue
        for r in range(floor):
            cells[r * width + c] = Tile.GROUND
    for c in saws:
        cells[floor * width + c] = Tile.SAW
    for c, h in crates:
        for k in range(h):
            cells[(floor + k) * width + c] = Tile.CRATE
    return TileGrid(width, HEIGHT, bytes(cells))


def coinrun_level(grid, coin, spawn=(0, 2), monsters=(), difficulty=1, seed=0):
    cells = bytearray(grid.cells)
    cells[coin[1] * grid.width + coin[0]] = Tile.COIN
    grid = TileGrid(grid.width, grid.height, bytes(cells))
    return CoinRunLevel(
        seed=seed,
        difficulty=difficulty,
        grid=grid,
        agent_spawn=spawn,
        coin_positions=(coin,),
        monsters=tuple(monsters),
        palette_hue=120,
    )


def platforms_level(grid, coins, spawn=(0, 2), monsters=(), seed=0):
    cells = bytearray(grid.cells)
    for c in coins:
        cells[c[1] * grid.width + c[0]] = Tile.COIN
    grid = TileGrid(grid.width, grid.height, bytes(cells))
    return PlatformsLevel(
        seed=seed,
        grid=grid,
        agent_spawn=spawn,
        coin_positions=tuple(coins),
        monsters=tuple(monsters),
        palette_hue=200,
    )
