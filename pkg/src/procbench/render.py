"""Software rasterizer: 64x64x3 byte observations, pure integer math.

Platformer levels render through a 16x16-tile camera (4 px per tile)
centered on the agent; mazes render their 9x9 visible patch at 7 px per
cell.  Every path uses integer arithmetic only, so output bytes are
identical on every platform.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .levels.maze import MazeLevel
from .sim.platformer import (
    AGENT_HALF_U, AGENT_HEIGHT_U, MONSTER_HALF_U, MONSTER_HEIGHT_U,
    PlatformerState, _monster_center_u,
)
from .tiles import Cell, Tile

OBS_SIZE = 64
TILE_PX = 4
VIEW_TILES = 16

# sprite and tile colors; non-empty kinds stay >= 30 apart in max-norm
TILE_COLORS = {
    Tile.GROUND: (90, 60, 30),
    Tile.WALL: (110, 110, 110),
    Tile.SAW: (230, 230, 230),
    Tile.LAVA: (240, 90, 20),
    Tile.COIN: (250, 210, 40),
    Tile.CRATE: (180, 130, 60),
}
AGENT_COLOR = (40, 90, 230)
MONSTER_COLOR = (200, 40, 200)

BACKGROUND_S = 90
BACKGROUND_V = 200

MAZE_WALL = (40, 40, 40)
MAZE_EMPTY = (160, 220, 160)
MAZE_GOAL = (220, 60, 60)
MAZE_AGENT = (60, 60, 220)
MAZE_CELL_PX = 7
MAZE_PATCH = 9

_PAD = OBS_SIZE  # sprite-free margin baked around level images


def hsv_to_rgb(h: int, s: int, v: int) -> tuple[int, int, int]:
    """Integer HSV (h in degrees, s/v in 0..255) to RGB bytes."""
    h %= 360
    region = h // 60
    rem = h % 60
    p = v * (255 - s) // 255
    q = v * (255 * 60 - s * rem) // (255 * 60)
    t = v * (255 * 60 - s * (60 - rem)) // (255 * 60)
    return (
        (v, t, p), (q, v, p), (p, v, t), (p, q, v), (t, p, v), (v, p, q)
    )[region]


def background_color(hue: int) -> tuple[int, int, int]:
    return hsv_to_rgb(hue, BACKGROUND_S, BACKGROUND_V)


@lru_cache(maxsize=128)
def _platformer_base(level) -> np.ndarray:
    """Padded level image: tiles baked in, coins left out (drawn live)."""
    grid = level.grid
    w_px = grid.width * TILE_PX
    h_px = grid.height * TILE_PX
    base = np.empty((h_px + 2 * _PAD, w_px + 2 * _PAD, 3), dtype=np.uint8)
    base[:] = TILE_COLORS[Tile.WALL]
    inner = base[_PAD:_PAD + h_px, _PAD:_PAD + w_px]
    inner[:] = background_color(level.palette_hue)
    for y in range(grid.height):
        row_base = y * grid.width
        img_y = (grid.height - 1 - y) * TILE_PX
        for x in range(grid.width):
            t = grid.cells[row_base + x]
            if t == Tile.EMPTY or t == Tile.COIN:
                continue
            inner[img_y:img_y + TILE_PX, x * TILE_PX:(x + 1) * TILE_PX] = (
                TILE_COLORS[t]
            )
    base.setflags(write=False)
    return base


def velocity_gray_x(vx_units: int) -> int:
    """Gray level for horizontal velocity, round-half-up, 0/255 at the
    clamp limits and 128 at rest."""
    u = min(max(vx_units, -10), 10)
    return (510 * (u + 10) + 20) // 40


def velocity_gray_y(vy_units: int) -> int:
    """Gray level for vertical velocity, clamped to twice jump speed."""
    u = min(max(vy_units, -40), 40)
    return (510 * (u + 40) + 80) // 160


def render_platformer(level, state: PlatformerState, paint_velocity: bool = False) -> np.ndarray:
    """Rasterize one platformer frame."""
    grid = level.grid
    w_px = grid.width * TILE_PX
    h_px = grid.height * TILE_PX
    cx = state.x // 5               # agent center, world px
    cy = (state.y + AGENT_HEIGHT_U // 2) // 5
    cam_x = min(max(cx - OBS_SIZE // 2, 0), max(w_px - OBS_SIZE, 0))
    cam_y = min(max(cy - OBS_SIZE // 2, 0), max(h_px - OBS_SIZE, 0))

    base = _platformer_base(level)
    img_y0 = _PAD + h_px - OBS_SIZE - cam_y
    img_x0 = _PAD + cam_x
    obs = base[img_y0:img_y0 + OBS_SIZE, img_x0:img_x0 + OBS_SIZE].copy()

    def fill(x_lo_u, x_hi_u, y_lo_u, y_hi_u, color):
        # world units -> world px (floor/ceil) -> window coords
        px0 = x_lo_u // 5 - cam_x
        px1 = -((-x_hi_u) // 5) - cam_x
        py0 = y_lo_u // 5 - cam_y
        py1 = -((-y_hi_u) // 5) - cam_y
        px0 = max(px0, 0)
        px1 = min(px1, OBS_SIZE)
        py0 = max(py0, 0)
        py1 = min(py1, OBS_SIZE)
        if px0 < px1 and py0 < py1:
            obs[OBS_SIZE - py1:OBS_SIZE - py0, px0:px1] = color

    for tx, ty in state.coins:
        fill(tx * 20, tx * 20 + 20, ty * 20, ty * 20 + 20, TILE_COLORS[Tile.COIN])
    for spec, ph in zip(level.monsters, state.monster_phases):
        mx = _monster_center_u(spec, ph)
        my = spec.y * 20
        fill(mx - MONSTER_HALF_U, mx + MONSTER_HALF_U,
             my, my + MONSTER_HEIGHT_U, MONSTER_COLOR)
    fill(state.x - AGENT_HALF_U, state.x + AGENT_HALF_U,
         state.y, state.y + AGENT_HEIGHT_U, AGENT_COLOR)

    if paint_velocity:
        obs[2:6, 2:6] = velocity_gray_x(state.vx)
        obs[2:6, 8:12] = velocity_gray_y(state.vy)
    return obs


_MAZE_LUT = np.array([MAZE_WALL, MAZE_EMPTY, MAZE_GOAL], dtype=np.uint8)


@lru_cache(maxsize=256)
def _maze_codes(level: MazeLevel) -> np.ndarray:
    codes = np.frombuffer(level.cells, dtype=np.uint8).reshape(level.dim, level.dim)
    padded = np.pad(codes, MAZE_PATCH // 2, constant_values=int(Cell.WALL))
    padded.setflags(write=False)
    return padded


def render_maze(level: MazeLevel, state) -> np.ndarray:
    """Rasterize the 9x9 patch around the agent; out-of-bounds is wall."""
    padded = _maze_codes(level)
    window = padded[state.row:state.row + MAZE_PATCH,
                    state.col:state.col + MAZE_PATCH]
    colors = _MAZE_LUT[window]
    px = np.repeat(np.repeat(colors, MAZE_CELL_PX, axis=0), MAZE_CELL_PX, axis=1)
    center = (MAZE_PATCH // 2) * MAZE_CELL_PX
    px[center:center + MAZE_CELL_PX, center:center + MAZE_CELL_PX] = MAZE_AGENT
    obs = np.empty((OBS_SIZE, OBS_SIZE, 3), dtype=np.uint8)
    obs[:63, :63] = px
    obs[63, :63] = px[62]
    obs[:63, 63] = px[:, 62]
    obs[63, 63] = px[62, 62]
    return obs


PPM_HEADER = b"P6\n64 64\n255\n"


def write_ppm(obs: np.ndarray, path) -> None:
    """Write a binary PPM (P6) with the exact observation bytes."""
    if obs.shape != (OBS_SIZE, OBS_SIZE, 3) or obs.dtype != np.uint8:
        raise ValueError("observation must be a 64x64x3 uint8 array")
    with open(path, "wb") as fh:
        fh.write(PPM_HEADER)
        fh.write(obs.tobytes())


def read_ppm(path) -> np.ndarray:
    """Read back a PPM written by write_ppm."""
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(PPM_HEADER):
        raise ValueError(f"{path}: not a procbench PPM")
    payload = data[len(PPM_HEADER):]
    if len(payload) != OBS_SIZE * OBS_SIZE * 3:
        raise ValueError(f"{path}: truncated payload")
    return np.frombuffer(payload, dtype=np.uint8).reshape(OBS_SIZE, OBS_SIZE, 3).copy()
