"""Grid dynamics for the mazes game: four moves, blocked moves are no-ops."""

from __future__ import annotations

from ..errors import EpisodeFinishedError
from ..outcome import Outcome
from ..tiles import Cell

GOAL_REWARD = 10.0
STEP_LIMIT = 500

UP, DOWN, LEFT, RIGHT = range(4)
N_ACTIONS = 4
ACTION_NAMES = ("UP", "DOWN", "LEFT", "RIGHT")

_MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1))


class MazeState:
    __slots__ = ("level", "row", "col", "step_count", "done", "outcome")

    def __init__(self, level):
        self.level = level
        self.row, self.col = level.agent_start
        self.step_count = 0
        self.done = False
        self.outcome = Outcome.RUNNING

    def key(self):
        return (self.row, self.col, self.step_count, self.done, self.outcome)

    def __eq__(self, other):
        return (
            isinstance(other, MazeState)
            and self.level == other.level
            and self.key() == other.key()
        )


def reset(level) -> MazeState:
    return MazeState(level)


def step(state: MazeState, action: int) -> tuple[MazeState, float, bool]:
    """Advance one move. Mutates and returns ``state``."""
    if state.done:
        raise EpisodeFinishedError("step() on a finished episode; reset first")
    if not 0 <= action < N_ACTIONS:
        raise ValueError(f"invalid action: {action}")

    dr, dc = _MOVES[action]
    nr, nc = state.row + dr, state.col + dc
    level = state.level
    reward = 0.0
    if 0 <= nr < level.dim and 0 <= nc < level.dim:
        cell = level.get(nr, nc)
        if cell != Cell.WALL:
            state.row, state.col = nr, nc
            if cell == Cell.GOAL:
                reward = GOAL_REWARD
                state.done = True
                state.outcome = Outcome.GOAL

    state.step_count += 1
    if not state.done and state.step_count >= STEP_LIMIT:
        state.done = True
        state.outcome = Outcome.TIMEOUT
    return state, reward, state.done
