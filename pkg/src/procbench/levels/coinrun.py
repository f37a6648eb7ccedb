"""Seeded generators for the coinrun and platforms games.

Both generators are pure functions of the 32-bit level seed.  Draws are
taken from tagged substreams (layout, entities, palette) in the fixed
orders documented inline; changing any draw order changes every level,
so treat the sequences as part of the wire format.
"""

from __future__ import annotations

from ..rng import TAG_ENTITIES, TAG_LAYOUT, TAG_PALETTE, derive_stream
from ..sim.platformer import MAX_GAP, MAX_STEP_UP
from ..tiles import Tile
from .grid import CoinRunLevel, MonsterSpec, PlatformsLevel, TileGrid

COINRUN_HEIGHT = 16
_BASE_FLOOR = 4
_FLOOR_MIN = 2
_FLOOR_MAX = COINRUN_HEIGHT - 8

PLATFORMS_WIDTH = 64
PLATFORMS_HEIGHT = 32
_PLAT_GROUND_TOP = 2          # ground occupies rows 0..1; feet row 2
_PLAT_ROW_MIN = 3             # lowest crate row: feet 4, rise 2 from ground
_PLAT_ROW_MAX = 20

_MONSTER_SPEED_MIN = 2        # 0.10 tiles/step
_MONSTER_SPEED_MAX = 4        # 0.20 tiles/step


def sample_difficulty(seed: int) -> int:
    """Difficulty in {1,2,3}; the first draw of the seed's layout stream."""
    return derive_stream(seed, TAG_LAYOUT).uniform_int(1, 3)


def generate_coinrun(seed: int) -> CoinRunLevel:
    """Build a coinrun level: left-to-right sections, one coin at the end.

    Layout stream order: difficulty, section count, then per section
    (length, floor delta, [gap flag, gap width], saw flag, [saw column],
    crate flag, [crate column, crate height]); section 0 draws only
    length and delta.  Entities stream: monster count, then per monster
    (segment, patrol ends, speed, phase).  Palette stream: hue.
    """
    layout = derive_stream(seed, TAG_LAYOUT)
    difficulty = layout.uniform_int(1, 3)
    n_sections = layout.uniform_int(1 + difficulty, 2 + 2 * difficulty)

    # sections as (start_col, length, floor, saw_col, crate_col, crate_h)
    sections = []
    floor = _BASE_FLOOR
    col = 0
    for i in range(n_sections):
        length = layout.uniform_int(5, 4 + 3 * difficulty)
        delta = layout.uniform_int(-MAX_STEP_UP, MAX_STEP_UP)
        gap_w = 0
        if i > 0:
            if layout.bernoulli(0.2 * difficulty):
                gap_w = layout.uniform_int(1, MAX_GAP)
                # a gap followed by a full-height ledge exceeds the jump
                # envelope, so cap the rise after any gap
                delta = min(delta, 1)
            floor = min(max(floor + delta, _FLOOR_MIN), _FLOOR_MAX)
            saw_col = crate_col = -1
            crate_h = 0
            if layout.bernoulli(0.15 * difficulty):
                saw_col = layout.uniform_int(2, length - 3)
            if layout.bernoulli(0.2):
                c = layout.uniform_int(2, length - 3)
                if c != saw_col:
                    crate_col = c
                    crate_h = layout.uniform_int(1, MAX_STEP_UP)
        else:
            floor = min(max(floor + delta, _FLOOR_MIN), _FLOOR_MAX)
            saw_col = crate_col = -1
            crate_h = 0
        col += gap_w
        sections.append((col, length, floor, saw_col, crate_col, crate_h))
        col += length

    width = col
    cells = bytearray(width * COINRUN_HEIGHT)
    for start, length, f, saw_col, crate_col, crate_h in sections:
        for c in range(start, start + length):
            for r in range(f):
                cells[r * width + c] = Tile.GROUND
        if saw_col >= 0:
            cells[f * width + start + saw_col] = Tile.SAW
        if crate_col >= 0:
            for k in range(crate_h):
                cells[(f + k) * width + start + crate_col] = Tile.CRATE
    # pits: gap columns carry lava on the bottom row
    for c in range(width):
        if not any(cells[r * width + c] == Tile.GROUND for r in range(COINRUN_HEIGHT)):
            cells[c] = Tile.LAVA

    entities = derive_stream(seed, TAG_ENTITIES)
    monsters = []
    n_monsters = entities.uniform_int(0, difficulty)
    eligible = [s for s in sections[1:] if s[1] >= 4]
    if eligible:
        for _ in range(n_monsters):
            start, length, f, _, _, _ = eligible[
                entities.uniform_int(0, len(eligible) - 1)
            ]
            lo, hi = start + 1, start + length - 2
            x0 = entities.uniform_int(lo, hi - 1)
            x1 = entities.uniform_int(x0 + 1, hi)
            speed = entities.uniform_int(_MONSTER_SPEED_MIN, _MONSTER_SPEED_MAX)
            phase = entities.uniform_int(0, 2 * (x1 - x0) * 20 - 1)
            monsters.append(MonsterSpec(x0, x1, f, speed, phase))

    first = sections[0]
    last = sections[-1]
    spawn = (first[0], first[2])
    coin = (last[0] + last[1] - 1, last[2])
    cells[coin[1] * width + coin[0]] = Tile.COIN

    hue = derive_stream(seed, TAG_PALETTE).uniform_int(0, 359)
    return CoinRunLevel(
        seed=seed,
        difficulty=difficulty,
        grid=TileGrid(width, COINRUN_HEIGHT, bytes(cells)),
        agent_spawn=spawn,
        coin_positions=(coin,),
        monsters=tuple(monsters),
        palette_hue=hue,
    )


# --- platforms -----------------------------------------------------------

class _Node:
    """A standable surface: the base ground or one floating platform."""

    __slots__ = ("x0", "x1", "feet", "idx")

    def __init__(self, x0, x1, feet, idx):
        self.x0 = x0          # first column
        self.x1 = x1          # last column
        self.feet = feet      # row the agent's feet occupy when standing
        self.idx = idx        # -1 for ground


def _blocked(monsters) -> set:
    """(col, feet_row) cells an agent can never safely occupy or cross,
    over-approximating each monster by its whole patrol sweep."""
    cells = set()
    for m in monsters:
        fr = m.y
        for q in (fr - 1, fr):
            for c in range(m.x0 - 1, m.x1 + 2):
                cells.add((c, q))
    return cells


def _vertical_ok(s: _Node, p: _Node, blocked) -> bool:
    rise = p.feet - s.feet
    if not 1 <= rise <= MAX_STEP_UP:
        return False
    lo = max(s.x0, p.x0)
    hi = min(s.x1, p.x1)
    for c in range(lo, hi + 1):
        if all((c, q) not in blocked for q in range(s.feet, p.feet + 1)):
            return True
    return False


# widest crossable gap by rise; conservative versus the jump envelope
_SIDE_GAP_LIMIT = {2: 2, 1: 3, 0: 3}


def _side_ok(s: _Node, p: _Node, others, blocked) -> bool:
    rise = p.feet - s.feet
    if rise > MAX_STEP_UP:
        return False
    gap_limit = _SIDE_GAP_LIMIT[rise] if rise >= 0 else MAX_GAP
    if p.x0 > s.x1:
        gap = p.x0 - s.x1 - 1
        cols = range(s.x1, p.x0 + 1)
        take, land = (s.x1, s.feet), (p.x0, p.feet)
    elif s.x0 > p.x1:
        gap = s.x0 - p.x1 - 1
        cols = range(p.x1, s.x0 + 1)
        take, land = (s.x0, s.feet), (p.x1, p.feet)
    else:
        return False  # horizontally overlapping: only the vertical move applies
    if gap > gap_limit:
        return False
    if take in blocked or land in blocked:
        return False
    r_lo = min(s.feet, p.feet)
    r_hi = s.feet + MAX_STEP_UP  # jump arcs peak two rows above takeoff
    for c in cols:
        for q in range(r_lo, r_hi + 1):
            if (c, q) in blocked:
                return False
    # the arc must not clip an unrelated platform
    for o in others:
        if o is s or o is p:
            continue
        if o.x0 <= cols.stop - 1 and o.x1 >= cols.start and r_lo <= o.feet <= r_hi:
            return False
    return True


def _reachable_nodes(nodes, blocked) -> set:
    """Indices of platforms reachable from the ground node by certified
    jump moves, avoiding monster sweeps."""
    ground = nodes[0]
    seen = {ground.idx}
    frontier = [ground]
    while frontier:
        s = frontier.pop()
        for p in nodes:
            if p.idx in seen:
                continue
            if _vertical_ok(s, p, blocked) or _side_ok(s, p, nodes, blocked):
                seen.add(p.idx)
                frontier.append(p)
    return seen


def generate_platforms(seed: int) -> PlatformsLevel:
    """Build a platforms level on a fixed 64x32 canvas.

    Layout stream order: platform count, then per platform repeated
    (length, x, row) candidate draws until one is reachable (40 tries,
    then the platform is dropped).  Entities stream: monster count, per
    monster (platform, patrol ends, speed, phase) with retries, then
    coin count and coin cells.  Palette stream: hue.
    """
    layout = derive_stream(seed, TAG_LAYOUT)
    W, H = PLATFORMS_WIDTH, PLATFORMS_HEIGHT
    cells = bytearray(W * H)
    for c in range(W):
        cells[c] = Tile.GROUND
        cells[W + c] = Tile.GROUND

    ground = _Node(0, W - 1, _PLAT_GROUND_TOP, -1)
    nodes = [ground]
    no_block: set = set()

    n_platforms = layout.uniform_int(10, 16)
    for idx in range(n_platforms):
        for _ in range(40):
            length = layout.uniform_int(3, 8)
            x = layout.uniform_int(0, W - length)
            row = layout.uniform_int(_PLAT_ROW_MIN, _PLAT_ROW_MAX)
            if any(
                cells[row * W + c] != Tile.EMPTY for c in range(x, x + length)
            ):
                continue
            cand = _Node(x, x + length - 1, row + 1, idx)
            # overlap of standing space with an existing platform's crates
            # is allowed (they are jump-through), but keep rows distinct
            # enough that every surface stays usable
            if any(
                o.idx >= 0 and abs(o.feet - cand.feet) < 2
                and o.x0 <= cand.x1 + 1 and o.x1 >= cand.x0 - 1
                for o in nodes
            ):
                continue
            if not any(
                _vertical_ok(s, cand, no_block) or _side_ok(s, cand, nodes, no_block)
                for s in nodes
            ):
                continue
            for c in range(x, x + length):
                cells[row * W + c] = Tile.CRATE
            nodes.append(cand)
            break

    entities = derive_stream(seed, TAG_ENTITIES)
    platforms = nodes[1:]

    monsters: list[MonsterSpec] = []
    n_monsters = entities.uniform_int(2, 6)
    for _ in range(n_monsters):
        candidates = [
            p for p in platforms
            if p.x1 - p.x0 + 1 >= 4
            and not any(m.y == p.feet and m.x0 >= p.x0 and m.x1 <= p.x1
                        for m in monsters)
        ]
        for attempt in range(20):
            if not candidates:
                break
            p = candidates[entities.uniform_int(0, len(candidates) - 1)]
            lo, hi = p.x0 + 1, p.x1 - 1
            x0 = entities.uniform_int(lo, hi - 1)
            x1 = entities.uniform_int(x0 + 1, hi)
            speed = entities.uniform_int(_MONSTER_SPEED_MIN, _MONSTER_SPEED_MAX)
            phase = entities.uniform_int(0, 2 * (x1 - x0) * 20 - 1)
            trial = monsters + [MonsterSpec(x0, x1, p.feet, speed, phase)]
            # prefer placements that keep every monster-free platform
            # reachable; after enough failures accept anyway (coins are
            # placed afterwards, on certified-reachable cells only)
            hosts = {
                n.idx for n in platforms for m in trial
                if m.y == n.feet and m.x0 >= n.x0 and m.x1 <= n.x1
            }
            reach = _reachable_nodes(nodes, _blocked(trial))
            strict = all(n.idx in reach or n.idx in hosts for n in platforms)
            if strict or attempt >= 12:
                monsters.append(trial[-1])
                break

    blocked = _blocked(monsters)
    reachable = _reachable_nodes(nodes, blocked)
    monster_rows = {m.y for m in monsters}

    # standable cells on reachable surfaces, clear of monster sweeps
    candidates = []
    for node in nodes:
        if node.idx not in reachable:
            continue
        if node.feet in monster_rows and any(
            m.y == node.feet and m.x0 >= node.x0 and m.x1 <= node.x1
            for m in monsters
        ):
            continue
        for c in range(node.x0, node.x1 + 1):
            if (c, node.feet) in blocked:
                continue
            if cells[node.feet * W + c] == Tile.EMPTY:
                candidates.append((c, node.feet))

    coin_count = entities.uniform_int(8, 14)
    coins: list = []
    taken = set()
    while len(coins) < coin_count:
        pos = candidates[entities.uniform_int(0, len(candidates) - 1)]
        if pos in taken:
            continue
        taken.add(pos)
        coins.append(pos)
        cells[pos[1] * W + pos[0]] = Tile.COIN

    hue = derive_stream(seed, TAG_PALETTE).uniform_int(0, 359)
    return PlatformsLevel(
        seed=seed,
        grid=TileGrid(W, H, bytes(cells)),
        agent_spawn=(0, _PLAT_GROUND_TOP),
        coin_positions=tuple(coins),
        monsters=tuple(monsters),
        palette_hue=hue,
    )
