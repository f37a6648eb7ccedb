"""Step-wise platformer dynamics for the coinrun and platforms games.

All kinematics use fixed-point integers in 1/20-tile units, which makes
trajectories bit-exact on every platform.  The tile-space constants
below are the public contract; the ``*_U`` values are their integer
mirrors used by the stepper.
"""

from __future__ import annotations

from ..errors import EpisodeFinishedError
from ..outcome import Outcome
from ..tiles import HAZARD_LUT, ONEWAY_LUT, SOLID_LUT

UNITS_PER_TILE = 20

GRAVITY = 0.2        # tiles/step^2
JUMP_VY = 1.0        # tiles/step, upward
RUN_ACCEL = 0.1      # tiles/step^2
MAX_VX = 0.5         # tiles/step
FRICTION = 0.05      # tiles/step^2
AGENT_HALF = 0.45    # tiles
MAX_GAP = 4          # tiles, generator contract
MAX_STEP_UP = 2      # tiles, generator contract

GRAVITY_U = 4
JUMP_VY_U = 20
RUN_ACCEL_U = 2
MAX_VX_U = 10
FRICTION_U = 1
AGENT_HALF_U = 9
AGENT_HEIGHT_U = 18
MONSTER_HALF_U = 8
MONSTER_HEIGHT_U = 16

COIN_REWARD = 10.0       # coinrun's single coin
PLATFORM_COIN_REWARD = 1.0
COMPLETION_BONUS = 9.0   # platforms: all coins collected
STEP_LIMIT = 1000

# Discrete action set, order fixed for serialization and random sampling.
NOOP, LEFT, RIGHT, JUMP, LEFT_JUMP, RIGHT_JUMP, DOWN = range(7)
N_ACTIONS = 7
ACTION_NAMES = ("NOOP", "LEFT", "RIGHT", "JUMP", "LEFT_JUMP", "RIGHT_JUMP", "DOWN")

_JUMP_ACTIONS = (False, False, False, True, True, True, False)
_DIR = (0, -1, 1, 0, -1, 1, 0)


def jump_apex_tiles() -> float:
    """Peak jump height implied by the tile-space constants."""
    return JUMP_VY**2 / (2 * GRAVITY)


def jump_range_tiles() -> float:
    """Horizontal distance covered over a full jump at max speed."""
    return (2 * JUMP_VY / GRAVITY) * MAX_VX


class PlatformerState:
    """Mutable per-episode state for one platformer environment."""

    __slots__ = (
        "level", "x", "y", "vx", "vy", "on_ground", "coins",
        "monster_phases", "step_count", "done", "outcome",
        "_solid", "_oneway", "_hazard", "_w", "_h",
    )

    def __init__(self, level):
        self.level = level
        grid = level.grid
        self._w = grid.width
        self._h = grid.height
        self._solid = grid.cells.translate(SOLID_LUT)
        self._oneway = grid.cells.translate(ONEWAY_LUT)
        self._hazard = grid.cells.translate(HAZARD_LUT)
        sx, sy = level.agent_spawn
        self.x = sx * 20 + 10
        self.y = sy * 20
        self.vx = 0
        self.vy = 0
        self.on_ground = True
        self.coins = set(level.coin_positions)
        self.monster_phases = [m.phase_units for m in level.monsters]
        self.step_count = 0
        self.done = False
        self.outcome = Outcome.RUNNING

    def key(self):
        """Value tuple capturing everything that evolves during an episode."""
        return (
            self.x, self.y, self.vx, self.vy, self.on_ground,
            frozenset(self.coins), tuple(self.monster_phases),
            self.step_count, self.done, self.outcome,
        )

    def clone(self) -> "PlatformerState":
        """Independent copy sharing the immutable level tables."""
        c = object.__new__(PlatformerState)
        c.level = self.level
        c._w, c._h = self._w, self._h
        c._solid, c._oneway, c._hazard = self._solid, self._oneway, self._hazard
        c.x, c.y, c.vx, c.vy = self.x, self.y, self.vx, self.vy
        c.on_ground = self.on_ground
        c.coins = set(self.coins)
        c.monster_phases = list(self.monster_phases)
        c.step_count = self.step_count
        c.done = self.done
        c.outcome = self.outcome
        return c

    def __eq__(self, other):
        return (
            isinstance(other, PlatformerState)
            and self.level == other.level
            and self.key() == other.key()
        )

    @property
    def position_tiles(self) -> tuple[float, float]:
        return (self.x / 20.0, self.y / 20.0)

    @property
    def velocity_tiles(self) -> tuple[float, float]:
        return (self.vx / 20.0, self.vy / 20.0)


def reset(level) -> PlatformerState:
    """Fresh episode state: agent at spawn, all coins present."""
    return PlatformerState(level)


def monster_position(spec, phase: float) -> tuple[float, float]:
    """Tile-space center of a monster at the given phase fraction.

    Triangular wave: phase 0 is patrol_start, 0.5 is patrol_end, and the
    wave returns to the start as phase approaches 1.
    """
    p = phase % 1.0
    t = 2 * p if p < 0.5 else 2 * (1 - p)
    return (spec.x0 + (spec.x1 - spec.x0) * t, float(spec.y))


def _monster_center_u(spec, phase_units: int) -> int:
    path = spec.path_units
    d = phase_units if phase_units < path else 2 * path - phase_units
    return spec.x0 * 20 + 10 + d


def death_check(state: PlatformerState) -> bool:
    """True iff the agent currently overlaps a hazard tile, a monster,
    or has fallen below the grid."""
    x, y = state.x, state.y
    if y < 0:
        return True
    w, h = state._w, state._h
    hazard = state._hazard
    c0 = (x - AGENT_HALF_U) // 20
    c1 = (x + AGENT_HALF_U - 1) // 20
    r0 = y // 20
    r1 = (y + AGENT_HEIGHT_U - 1) // 20
    for r in range(max(r0, 0), min(r1, h - 1) + 1):
        base = r * w
        for c in range(max(c0, 0), min(c1, w - 1) + 1):
            if hazard[base + c]:
                return True
    for spec, ph in zip(state.level.monsters, state.monster_phases):
        mx = _monster_center_u(spec, ph)
        my = spec.y * 20
        if (x - AGENT_HALF_U < mx + MONSTER_HALF_U
                and x + AGENT_HALF_U > mx - MONSTER_HALF_U
                and y < my + MONSTER_HEIGHT_U
                and y + AGENT_HEIGHT_U > my):
            return True
    return False


def step(state: PlatformerState, action: int) -> tuple[PlatformerState, float, bool]:
    """Advance one timestep. Mutates and returns ``state``.

    Update order: horizontal accel/friction, jump, gravity, x sweep,
    y sweep, monster patrol, contact resolution, step counter.
    """
    if state.done:
        raise EpisodeFinishedError("step() on a finished episode; reset first")
    if not 0 <= action < N_ACTIONS:
        raise ValueError(f"invalid action: {action}")

    solid = state._solid
    oneway = state._oneway
    w = state._w
    h = state._h
    x = state.x
    y = state.y
    vx = state.vx
    vy = state.vy

    # 1. horizontal control
    d = _DIR[action]
    if d:
        vx += RUN_ACCEL_U * d
        if vx > MAX_VX_U:
            vx = MAX_VX_U
        elif vx < -MAX_VX_U:
            vx = -MAX_VX_U
    elif vx > 0:
        vx = vx - FRICTION_U if vx > FRICTION_U else 0
    elif vx < 0:
        vx = vx + FRICTION_U if vx < -FRICTION_U else 0

    # 2. jump, 3. gravity
    if state.on_ground and _JUMP_ACTIONS[action]:
        vy = JUMP_VY_U
    vy -= GRAVITY_U

    # 4a. x sweep (|vx| < one tile, so at most one column boundary)
    if vx:
        nx = x + vx
        r0 = y // 20
        r1 = (y + AGENT_HEIGHT_U - 1) // 20
        if vx > 0:
            c = (nx + AGENT_HALF_U - 1) // 20
            if c >= w:
                nx = w * 20 - AGENT_HALF_U
                vx = 0
            elif c != (x + AGENT_HALF_U - 1) // 20:
                for r in range(max(r0, 0), min(r1, h - 1) + 1):
                    if solid[r * w + c]:
                        nx = c * 20 - AGENT_HALF_U
                        vx = 0
                        break
        else:
            c = (nx - AGENT_HALF_U) // 20
            if c < 0:
                nx = AGENT_HALF_U
                vx = 0
            elif c != (x - AGENT_HALF_U) // 20:
                for r in range(max(r0, 0), min(r1, h - 1) + 1):
                    if solid[r * w + c]:
                        nx = (c + 1) * 20 + AGENT_HALF_U
                        vx = 0
                        break
        x = nx

    # 4b. y sweep, crossing every row boundary on the way
    on_ground = False
    c0 = max((x - AGENT_HALF_U) // 20, 0)
    c1 = min((x + AGENT_HALF_U - 1) // 20, w - 1)
    if vy > 0:
        ny = y + vy
        r_old = (y + AGENT_HEIGHT_U - 1) // 20
        r_new = (ny + AGENT_HEIGHT_U - 1) // 20
        for r in range(r_old + 1, r_new + 1):
            if r < 0 or r >= h:
                continue
            base = r * w
            hit = False
            for c in range(c0, c1 + 1):
                if solid[base + c]:
                    hit = True
                    break
            if hit:
                ny = r * 20 - AGENT_HEIGHT_U
                vy = 0
                break
        y = ny
    elif vy < 0:
        ny = y + vy
        r_old = y // 20
        r_new = ny // 20
        drop = action == DOWN
        for r in range(r_old - 1, r_new - 1, -1):
            if r >= h:
                continue
            if r < 0:
                break
            base = r * w
            hit = False
            for c in range(c0, c1 + 1):
                t = base + c
                if solid[t] or (oneway[t] and not drop):
                    hit = True
                    break
            if hit:
                ny = (r + 1) * 20
                vy = 0
                on_ground = True
                break
        y = ny

    # 5. monster patrol
    monsters = state.level.monsters
    phases = state.monster_phases
    if monsters:
        for i, spec in enumerate(monsters):
            phases[i] = (phases[i] + spec.speed_units) % (2 * spec.path_units)

    state.x = x
    state.y = y
    state.vx = vx
    state.vy = vy
    state.on_ground = on_ground

    # 6. contacts: hazards kill before coins pay out
    reward = 0.0
    if death_check(state):
        state.done = True
        state.outcome = Outcome.DEATH
    elif state.coins:
        hit = None
        for tx, ty in state.coins:
            cx = tx * 20
            cy = ty * 20
            if (x - AGENT_HALF_U < cx + 20 and x + AGENT_HALF_U > cx
                    and y < cy + 20 and y + AGENT_HEIGHT_U > cy):
                if hit is None:
                    hit = [(tx, ty)]
                else:
                    hit.append((tx, ty))
        if hit:
            if state.level.game == "coinrun":
                state.coins.clear()
                reward = COIN_REWARD
                state.done = True
                state.outcome = Outcome.COIN_ALL
            else:
                for pos in hit:
                    state.coins.discard(pos)
                    reward += PLATFORM_COIN_REWARD
                if not state.coins:
                    reward += COMPLETION_BONUS
                    state.done = True
                    state.outcome = Outcome.COIN_ALL

    # 7. step counter and time limit
    state.step_count += 1
    if not state.done and state.step_count >= STEP_LIMIT:
        state.done = True
        state.outcome = Outcome.TIMEOUT

    return state, reward, state.done
