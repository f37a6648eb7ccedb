"""Level documents: a stable JSON wire format for all three games.

Grids are stored as lists of row strings, top row first.  Documents
embed the seed, so regenerating from the seed and deserializing the
document yield the same level.  The rng_tags block records the
substream assignments the generators draw from.
"""

from __future__ import annotations

import json

from ..errors import LevelFormatError
from ..rng import (
    TAG_AUGMENT, TAG_ENTITIES, TAG_EPISODE, TAG_LAYOUT, TAG_PALETTE,
)
from ..tiles import Cell, Tile
from .grid import CoinRunLevel, MonsterSpec, PlatformsLevel, TileGrid
from .maze import MazeLevel

FORMAT = "procbench-level-v1"

RNG_TAGS = {
    "layout": TAG_LAYOUT,
    "entities": TAG_ENTITIES,
    "palette": TAG_PALETTE,
    "episode": TAG_EPISODE,
    "augment": TAG_AUGMENT,
}

_TILE_CHARS = {
    Tile.EMPTY: ".",
    Tile.GROUND: "#",
    Tile.WALL: "W",
    Tile.SAW: "S",
    Tile.LAVA: "L",
    Tile.COIN: "C",
    Tile.CRATE: "=",
}
_CHAR_TILES = {v: k for k, v in _TILE_CHARS.items()}

_CELL_CHARS = {Cell.WALL: "#", Cell.EMPTY: ".", Cell.GOAL: "G"}
_CHAR_CELLS = {v: k for k, v in _CELL_CHARS.items()}


def _grid_rows(grid: TileGrid) -> list[str]:
    rows = []
    for y in range(grid.height - 1, -1, -1):
        base = y * grid.width
        rows.append(
            "".join(_TILE_CHARS[grid.cells[base + x]] for x in range(grid.width))
        )
    return rows


def serialize_level(level) -> str:
    """Canonical JSON text for a level (sorted keys, 2-space indent)."""
    doc: dict = {
        "format": FORMAT,
        "game": level.game,
        "seed": level.seed,
        "rng_tags": RNG_TAGS,
    }
    if isinstance(level, MazeLevel):
        doc["dim"] = level.dim
        doc["rows"] = [
            "".join(
                _CELL_CHARS[level.cells[r * level.dim + c]]
                for c in range(level.dim)
            )
            for r in range(level.dim)
        ]
        doc["agent_start"] = list(level.agent_start)
        doc["goal"] = list(level.goal)
    else:
        doc["grid"] = {
            "width": level.grid.width,
            "height": level.grid.height,
            "rows": _grid_rows(level.grid),
        }
        doc["agent_spawn"] = list(level.agent_spawn)
        doc["coins"] = [list(c) for c in level.coin_positions]
        doc["monsters"] = [
            {
                "x0": m.x0,
                "x1": m.x1,
                "y": m.y,
                "speed_units": m.speed_units,
                "phase_units": m.phase_units,
            }
            for m in level.monsters
        ]
        doc["palette_hue"] = level.palette_hue
        if isinstance(level, CoinRunLevel):
            doc["difficulty"] = level.difficulty
    return json.dumps(doc, indent=2, sort_keys=True)


def _need(doc: dict, key: str, kind, path: str):
    if key not in doc:
        raise LevelFormatError(f"{path}{key}", "missing field")
    value = doc[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise LevelFormatError(
            f"{path}{key}", f"expected {kind.__name__}, got {type(value).__name__}"
        )
    return value


def _pair(doc: dict, key: str, path: str) -> tuple[int, int]:
    raw = _need(doc, key, list, path)
    if len(raw) != 2 or not all(isinstance(v, int) for v in raw):
        raise LevelFormatError(f"{path}{key}", "expected a pair of integers")
    return (raw[0], raw[1])


def deserialize_level(text: str):
    """Parse a level document; raises LevelFormatError naming the bad field."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LevelFormatError("", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise LevelFormatError("", "document is not an object")
    fmt = _need(doc, "format", str, "")
    if fmt != FORMAT:
        raise LevelFormatError("format", f"unsupported format {fmt!r}")
    game = _need(doc, "game", str, "")
    seed = _need(doc, "seed", int, "")

    if game == "mazes":
        dim = _need(doc, "dim", int, "")
        rows = _need(doc, "rows", list, "")
        if len(rows) != dim:
            raise LevelFormatError("rows", f"expected {dim} rows, got {len(rows)}")
        cells = bytearray(dim * dim)
        for r, row in enumerate(rows):
            if not isinstance(row, str) or len(row) != dim:
                raise LevelFormatError(f"rows[{r}]", f"expected string of length {dim}")
            for c, ch in enumerate(row):
                if ch not in _CHAR_CELLS:
                    raise LevelFormatError(f"rows[{r}]", f"unknown cell char {ch!r}")
                cells[r * dim + c] = _CHAR_CELLS[ch]
        start = _pair(doc, "agent_start", "")
        goal = _pair(doc, "goal", "")
        return MazeLevel(
            seed=seed, dim=dim, cells=bytes(cells), agent_start=start, goal=goal
        )

    if game not in ("coinrun", "platforms"):
        raise LevelFormatError("game", f"unknown game {game!r}")

    graw = _need(doc, "grid", dict, "")
    width = _need(graw, "width", int, "grid.")
    height = _need(graw, "height", int, "grid.")
    rows = _need(graw, "rows", list, "grid.")
    if len(rows) != height:
        raise LevelFormatError("grid.rows", f"expected {height} rows, got {len(rows)}")
    cells = bytearray(width * height)
    for i, row in enumerate(rows):
        if not isinstance(row, str) or len(row) != width:
            raise LevelFormatError(
                f"grid.rows[{i}]", f"expected string of length {width}"
            )
        y = height - 1 - i
        for x, ch in enumerate(row):
            if ch not in _CHAR_TILES:
                raise LevelFormatError(f"grid.rows[{i}]", f"unknown tile char {ch!r}")
            cells[y * width + x] = _CHAR_TILES[ch]
    grid = TileGrid(width, height, bytes(cells))

    spawn = _pair(doc, "agent_spawn", "")
    coins_raw = _need(doc, "coins", list, "")
    coins = []
    for i, item in enumerate(coins_raw):
        if not isinstance(item, list) or len(item) != 2:
            raise LevelFormatError(f"coins[{i}]", "expected a pair of integers")
        coins.append((item[0], item[1]))
    monsters = []
    for i, m in enumerate(_need(doc, "monsters", list, "")):
        if not isinstance(m, dict):
            raise LevelFormatError(f"monsters[{i}]", "expected an object")
        p = f"monsters[{i}]."
        try:
            monsters.append(
                MonsterSpec(
                    x0=_need(m, "x0", int, p),
                    x1=_need(m, "x1", int, p),
                    y=_need(m, "y", int, p),
                    speed_units=_need(m, "speed_units", int, p),
                    phase_units=_need(m, "phase_units", int, p),
                )
            )
        except ValueError as exc:
            if isinstance(exc, LevelFormatError):
                raise
            raise LevelFormatError(f"monsters[{i}]", str(exc)) from exc
    hue = _need(doc, "palette_hue", int, "")

    if game == "coinrun":
        difficulty = _need(doc, "difficulty", int, "")
        return CoinRunLevel(
            seed=seed,
            difficulty=difficulty,
            grid=grid,
            agent_spawn=spawn,
            coin_positions=tuple(coins),
            monsters=tuple(monsters),
            palette_hue=hue,
        )
    return PlatformsLevel(
        seed=seed,
        grid=grid,
        agent_spawn=spawn,
        coin_positions=tuple(coins),
        monsters=tuple(monsters),
        palette_hue=hue,
    )
