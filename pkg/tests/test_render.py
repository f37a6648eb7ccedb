import dataclasses
from pathlib import Path

import numpy as np
import pytest

from procbench.levels import generate_coinrun, generate_maze
from procbench.render import (
    AGENT_COLOR, MAZE_AGENT, MAZE_GOAL, MAZE_WALL, MONSTER_COLOR, PPM_HEADER,
    TILE_COLORS, read_ppm, render_maze, render_platformer, velocity_gray_x,
    velocity_gray_y, write_ppm,
)
from procbench.rng import derive_stream
from procbench.sim import maze as msim
from procbench.sim import platformer as plat
from procbench.tiles import Cell

GOLDEN = Path(__file__).parent / "golden" / "coinrun_seed42_reset.ppm"


def test_velocity_gray_midpoint_and_endpoints():
    assert velocity_gray_x(0) == 128  # round-half-up at the midpoint
    assert velocity_gray_x(10) == 255
    assert velocity_gray_x(-10) == 0
    assert velocity_gray_y(0) == 128
    assert velocity_gray_y(40) == 255
    assert velocity_gray_y(-40) == 0


def test_velocity_decode_within_one_quantization_step():
    rng = derive_stream(2, 0)
    for _ in range(1000):
        vx_units = rng.uniform_int(-10, 10)
        gray = velocity_gray_x(vx_units)
        decoded = gray / 255 * (2 * 0.5) - 0.5
        assert abs(decoded - vx_units / 20) <= 1 / 255


def test_velocity_squares_painted_at_fixed_blocks():
    level = generate_coinrun(42)
    state = plat.reset(level)
    state.vx = 10
    state.vy = -40
    obs = render_platformer(level, state, paint_velocity=True)
    assert (obs[2:6, 2:6] == 255).all()
    assert (obs[2:6, 8:12] == 0).all()
    bare = render_platformer(level, state, paint_velocity=False)
    assert not (bare[2:6, 2:6] == 255).all()


def test_render_is_pure_and_byte_stable():
    level = generate_coinrun(42)
    state = plat.reset(level)
    a = render_platformer(level, state, paint_velocity=True)
    b = render_platformer(level, state, paint_velocity=True)
    assert a.dtype == np.uint8 and a.shape == (64, 64, 3)
    assert np.array_equal(a, b)


def test_golden_frame_stable():
    level = generate_coinrun(42)
    obs = render_platformer(level, plat.reset(level))
    assert np.array_equal(obs, read_ppm(GOLDEN))


def test_palette_colors_pairwise_distinct():
    colors = list(TILE_COLORS.values()) + [AGENT_COLOR, MONSTER_COLOR]
    for i, a in enumerate(colors):
        for b in colors[i + 1:]:
            assert max(abs(x - y) for x, y in zip(a, b)) >= 30


def test_maze_agent_block_always_centered():
    for seed in (0, 5, 9):
        level = generate_maze(seed)
        obs = render_maze(level, msim.reset(level))
        assert (obs[28:35, 28:35] == MAZE_AGENT).all()


def test_maze_corner_shows_out_of_bounds_as_wall():
    level = generate_maze(0)
    state = msim.reset(level)
    state.row, state.col = 0, 0
    obs = render_maze(level, state)
    assert (obs[:7, :7] == MAZE_WALL).all()  # beyond the top-left corner


def test_goal_outside_patch_invisible():
    seed = 0
    while True:
        level = generate_maze(seed)
        r, c = level.agent_start
        gr, gc = level.goal
        if max(abs(gr - r), abs(gc - c)) > 4:
            break
        seed += 1
    obs = render_maze(level, msim.reset(level))
    assert not (obs == MAZE_GOAL).all(axis=2).any()


def test_partial_observability_far_cells_do_not_matter():
    seed = 0
    while True:
        level = generate_maze(seed)
        if level.dim >= 15:
            break
        seed += 1
    r, c = level.agent_start
    far = next(
        (rr, cc)
        for rr in range(level.dim)
        for cc in range(level.dim)
        if max(abs(rr - r), abs(cc - c)) >= 6 and (rr, cc) != level.goal
    )
    cells = bytearray(level.cells)
    idx = far[0] * level.dim + far[1]
    cells[idx] = Cell.EMPTY if cells[idx] == Cell.WALL else Cell.WALL
    altered = dataclasses.replace(level, cells=bytes(cells))
    state = msim.reset(level)
    assert np.array_equal(render_maze(level, state), render_maze(altered, state))


def test_ppm_format_and_round_trip(tmp_path):
    level = generate_coinrun(1)
    obs = render_platformer(level, plat.reset(level))
    path = tmp_path / "frame.ppm"
    write_ppm(obs, path)
    data = path.read_bytes()
    assert data.startswith(PPM_HEADER)
    assert PPM_HEADER == b"P6\n64 64\n255\n"
    assert len(data) == len(PPM_HEADER) + 64 * 64 * 3
    assert np.array_equal(read_ppm(path), obs)


def test_write_ppm_rejects_bad_shapes(tmp_path):
    with pytest.raises(ValueError):
        write_ppm(np.zeros((32, 32, 3), dtype=np.uint8), tmp_path / "x.ppm")
