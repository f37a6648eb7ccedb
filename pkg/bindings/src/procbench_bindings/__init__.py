"""Thin binding layer over the procbench batch API.

The surface mirrors a C-style foreign-function boundary: integer
handles, flat create/step/close calls, and a row-major B x 64 x 64 x 3
byte observation buffer that the caller owns after each step.  A
gym-style wrapper class sits on top for RL training loops.

Only the documented flat surface of :mod:`procbench.vecenv` is used;
the expected ABI tag is checked at import time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

import procbench.vecenv as _native
from procbench.benchmark import PRESETS
from procbench.errors import ConfigError
from procbench.wrappers import CutoutConfig, EpsilonGreedyConfig

EXPECTED_ABI = 1

if _native.ABI_VERSION != EXPECTED_ABI:  # pragma: no cover - version skew
    raise RuntimeError(
        f"procbench ABI {_native.ABI_VERSION} does not match the "
        f"bindings' expected ABI {EXPECTED_ABI}"
    )

GAMES = _native.GAMES
OBS_SHAPE = _native.OBS_SHAPE


class BindingError(RuntimeError):
    """Raised for handle misuse and invalid create arguments."""


_registry: dict[int, _native.VecEnv] = {}
_next_handle = 1


def _parse_level_set(spec: str) -> _native.LevelSet:
    if spec == "unbounded":
        return _native.LevelSet.unbounded()
    try:
        seeds = [int(s) for s in spec.split(",") if s]
    except ValueError as exc:
        raise BindingError(f"bad level set spec {spec!r}: {exc}") from exc
    return _native.LevelSet.explicit(seeds)


def _parse_wrappers(flags: Optional[dict]) -> Optional[_native.WrapperSpec]:
    if not flags:
        return None
    cutout = CutoutConfig() if flags.get("cutout") else None
    epsilon = flags.get("epsilon_greedy")
    eps_cfg = EpsilonGreedyConfig(float(epsilon)) if epsilon is not None else None
    return _native.WrapperSpec(cutout=cutout, epsilon_greedy=eps_cfg)


def env_create(game: str, batch: int, level_set_spec: str = "unbounded",
               master_seed: int = 0, wrapper_flags: Optional[dict] = None) -> int:
    """Create a batch of environments; returns an opaque handle."""
    global _next_handle
    try:
        venv = _native.create(
            game, batch, _parse_level_set(level_set_spec), master_seed,
            _parse_wrappers(wrapper_flags),
        )
    except ConfigError as exc:
        raise BindingError(str(exc)) from exc
    handle = _next_handle
    _next_handle += 1
    _registry[handle] = venv
    return handle


def _resolve(handle: int) -> _native.VecEnv:
    try:
        return _registry[handle]
    except KeyError:
        raise BindingError(f"unknown or closed handle {handle}") from None


def env_observe(handle: int) -> np.ndarray:
    """Current observation batch (the first frames right after create)."""
    return np.ascontiguousarray(_resolve(handle).observe())


def env_step(handle: int, actions: Sequence[int]):
    """Step every environment once.

    Returns (observations, rewards, dones, infos); the observation array
    is freshly allocated and owned by the caller.
    """
    venv = _resolve(handle)
    result = venv.step_batch(list(actions))
    return (
        np.ascontiguousarray(result.observations),
        result.rewards,
        result.dones,
        result.infos,
    )


def env_action_space(handle: int) -> int:
    return _resolve(handle).n_actions


def env_batch(handle: int) -> int:
    return _resolve(handle).batch


def env_close(handle: int) -> None:
    """Release a handle; closing twice or using it afterwards raises."""
    venv = _registry.pop(handle, None)
    if venv is None:
        raise BindingError(f"double close or unknown handle {handle}")
    venv.close()


def live_handles() -> int:
    """Number of open handles (leak checks in tests)."""
    return len(_registry)


@dataclass(frozen=True)
class BoxSpace:
    shape: tuple
    dtype: str
    low: int = 0
    high: int = 255


@dataclass(frozen=True)
class DiscreteSpace:
    n: int


class GymBatchEnv:
    """Gym-style vectorized wrapper over a binding handle.

    reset() returns the current observation batch; step(actions)
    returns (obs, rewards, dones, infos) with auto-reset semantics.
    Training hyperparameter presets for the game are exposed under
    ``training_preset``.
    """

    def __init__(self, handle: int, game: str):
        if game not in GAMES:
            raise BindingError(f"unknown game {game!r}")
        self._handle = handle
        self.game = game
        self.num_envs = env_batch(handle)
        self.observation_space = BoxSpace(shape=OBS_SHAPE, dtype="uint8")
        self.action_space = DiscreteSpace(n=env_action_space(handle))
        self.training_preset = PRESETS[game].as_dict()

    def reset(self):
        return env_observe(self._handle)

    def step(self, actions):
        return env_step(self._handle, actions)

    def close(self):
        env_close(self._handle)


def gym_wrapper(game: str, batch: int = 1, level_set_spec: str = "unbounded",
                master_seed: int = 0,
                wrapper_flags: Optional[dict] = None) -> GymBatchEnv:
    handle = env_create(game, batch, level_set_spec, master_seed, wrapper_flags)
    return GymBatchEnv(handle, game)
