"""Batched environment facade with per-episode level sampling and
auto-reset.

The flat surface here (create / step_batch / close plus the row-major
B x 64 x 64 x 3 byte observation buffer) is the normative boundary for
foreign-function bindings; keep it stable and bump ABI_VERSION on any
breaking change.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import ConfigError
from .levels import generate
from .render import OBS_SIZE, render_maze, render_platformer
from .rng import SEED_SPACE, TAG_AUGMENT, TAG_EPISODE, Rng, derive_stream
from .sim import maze as maze_sim
from .sim import platformer as plat_sim
from .wrappers import CutoutConfig, EpsilonGreedyConfig, apply_cutout, apply_epsilon_greedy

ABI_VERSION = 1

GAMES = ("coinrun", "platforms", "mazes")

OBS_SHAPE = (OBS_SIZE, OBS_SIZE, 3)


def action_space_size(game: str) -> int:
    return maze_sim.N_ACTIONS if game == "mazes" else plat_sim.N_ACTIONS


@dataclass(frozen=True)
class LevelSet:
    """Sampling universe for episodes: explicit seed list or the full
    32-bit space."""

    seeds: Optional[tuple[int, ...]]  # None means unbounded

    @classmethod
    def explicit(cls, seeds) -> "LevelSet":
        seeds = tuple(int(s) for s in seeds)
        if not seeds:
            raise ConfigError("explicit level set must not be empty")
        if len(set(seeds)) != len(seeds):
            raise ConfigError("explicit level set contains duplicate seeds")
        for s in seeds:
            if not 0 <= s < SEED_SPACE:
                raise ConfigError(f"seed out of 32-bit range: {s}")
        return cls(seeds)

    @classmethod
    def unbounded(cls) -> "LevelSet":
        return cls(None)

    @property
    def is_unbounded(self) -> bool:
        return self.seeds is None

    def __contains__(self, seed: int) -> bool:
        return self.seeds is None or seed in set(self.seeds)


def sample_level(level_set: LevelSet, rng: Rng) -> int:
    """Uniform seed draw from the set."""
    if level_set.seeds is None:
        return rng.uniform_int(0, SEED_SPACE - 1)
    if not level_set.seeds:
        raise ConfigError("explicit level set must not be empty")
    return level_set.seeds[rng.uniform_int(0, len(level_set.seeds) - 1)]


@dataclass(frozen=True)
class WrapperSpec:
    """Training-time wrappers applied inside the batch loop."""

    cutout: Optional[CutoutConfig] = None
    epsilon_greedy: Optional[EpsilonGreedyConfig] = None


class StepResult(NamedTuple):
    observations: np.ndarray   # (B, 64, 64, 3) uint8
    rewards: np.ndarray        # (B,) float64
    dones: np.ndarray          # (B,) bool
    infos: list[dict]


class _EnvSlot:
    __slots__ = ("level_rng", "aug_rng", "level", "state", "episode_return")

    def __init__(self, level_rng, aug_rng):
        self.level_rng = level_rng
        self.aug_rng = aug_rng
        self.level = None
        self.state = None
        self.episode_return = 0.0


class VecEnv:
    """B independent environments stepped in lockstep.

    When an episode finishes, its slot immediately resets on a freshly
    sampled level and the returned observation is the first frame of the
    new episode; the matching info dict describes the episode that just
    ended.
    """

    def __init__(self, game: str, batch: int, level_set: LevelSet,
                 master_seed: int, wrappers: Optional[WrapperSpec] = None,
                 render_observations: bool = True):
        if game not in GAMES:
            raise ConfigError(f"unknown game: {game!r}")
        if batch < 1:
            raise ConfigError(f"batch size must be >= 1, got {batch}")
        if not 0 <= master_seed < SEED_SPACE:
            raise ConfigError(f"master seed out of 32-bit range: {master_seed}")
        if not isinstance(level_set, LevelSet):
            raise ConfigError("level_set must be a LevelSet")
        self.game = game
        self.batch = batch
        self.level_set = level_set
        self.master_seed = master_seed
        self.wrappers = wrappers or WrapperSpec()
        self.render_observations = render_observations
        self.n_actions = action_space_size(game)
        self.closed = False
        self._maze = game == "mazes"
        self._sim = maze_sim if self._maze else plat_sim
        # derive per-env streams from master_seed XOR env index so one
        # env's level sequence does not depend on the batch size
        self._slots = [
            _EnvSlot(
                derive_stream((master_seed ^ i) % SEED_SPACE, TAG_EPISODE),
                derive_stream((master_seed ^ i) % SEED_SPACE, TAG_AUGMENT),
            )
            for i in range(batch)
        ]
        for slot in self._slots:
            self._start_episode(slot)
        self._zero_obs = np.zeros((batch,) + OBS_SHAPE, dtype=np.uint8)
        self._zero_obs.setflags(write=False)

    def _start_episode(self, slot: _EnvSlot) -> None:
        seed = sample_level(self.level_set, slot.level_rng)
        slot.level = generate(self.game, seed)
        slot.state = self._sim.reset(slot.level)
        slot.episode_return = 0.0

    def _render(self, slot: _EnvSlot) -> np.ndarray:
        if self._maze:
            return render_maze(slot.level, slot.state)
        return render_platformer(slot.level, slot.state)

    def observe(self) -> np.ndarray:
        """Current observation batch (first frames right after create)."""
        if not self.render_observations:
            return self._zero_obs
        obs = np.empty((self.batch,) + OBS_SHAPE, dtype=np.uint8)
        for i, slot in enumerate(self._slots):
            frame = self._render(slot)
            cut = self.wrappers.cutout
            if cut is not None and cut.enabled:
                frame = apply_cutout(frame, slot.aug_rng, cut)
            obs[i] = frame
        return obs

    def step_batch(self, actions: Sequence[int]) -> StepResult:
        if self.closed:
            raise ConfigError("step_batch() on a closed VecEnv")
        if len(actions) != self.batch:
            raise ValueError(
                f"expected {self.batch} actions, got {len(actions)}"
            )
        render = self.render_observations
        obs = (
            np.empty((self.batch,) + OBS_SHAPE, dtype=np.uint8)
            if render else self._zero_obs
        )
        rewards = np.zeros(self.batch, dtype=np.float64)
        dones = np.zeros(self.batch, dtype=bool)
        infos: list[dict] = []
        eps = self.wrappers.epsilon_greedy
        cut = self.wrappers.cutout
        for i, slot in enumerate(self._slots):
            action = actions[i]
            if not 0 <= action < self.n_actions:
                raise ValueError(f"env {i}: invalid action {action}")
            if eps is not None:
                action, _ = apply_epsilon_greedy(
                    action, self.n_actions, slot.aug_rng, eps.epsilon
                )
            _, reward, done = self._sim.step(slot.state, action)
            slot.episode_return += reward
            rewards[i] = reward
            dones[i] = done
            info = {
                "level_seed": slot.level.seed,
                "episode_steps": slot.state.step_count,
                "episode_return": slot.episode_return,
                "outcome": slot.state.outcome.value,
            }
            infos.append(info)
            if done:
                self._start_episode(slot)
            if render:
                frame = self._render(slot)
                if cut is not None and cut.enabled:
                    frame = apply_cutout(frame, slot.aug_rng, cut)
                obs[i] = frame
        return StepResult(obs, rewards, dones, infos)

    def close(self) -> None:
        self.closed = True


def create(game: str, batch: int, level_set: LevelSet, master_seed: int,
           wrappers: Optional[WrapperSpec] = None,
           render_observations: bool = True) -> VecEnv:
    """Flat constructor mirroring the foreign-function surface."""
    return VecEnv(game, batch, level_set, master_seed, wrappers,
                  render_observations)
