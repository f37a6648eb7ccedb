"""Environment-side regularizers: cutout masking, random action
override, and frame stacking.

Cutout and the action override are training aids; the evaluation
harness never applies them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .rng import Rng


@dataclass(frozen=True)
class CutoutConfig:
    n_rects_max: int = 5
    rect_w_max: int = 16
    rect_h_max: int = 16
    enabled: bool = True

    def __post_init__(self):
        if not 1 <= self.n_rects_max <= 10:
            raise ConfigError("n_rects_max must be in [1, 10]")
        if self.rect_w_max < 1 or self.rect_h_max < 1:
            raise ConfigError("rectangle dimensions must be >= 1")


@dataclass(frozen=True)
class EpsilonGreedyConfig:
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ConfigError("epsilon must be in [0, 1]")


@dataclass(frozen=True)
class FrameStackConfig:
    k: int = 4

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError("stack depth must be >= 1")


def apply_cutout(obs: np.ndarray, rng: Rng, config: CutoutConfig = CutoutConfig()) -> np.ndarray:
    """Mask 1..n_rects_max random rectangles with random solid colors.

    Draw order per image: rect count, then per rectangle (col, row,
    width, height, r, g, b).  Rectangles are clipped at the image edge;
    pixels outside every rectangle are untouched.  Advances ``rng`` in
    place and returns a new array.
    """
    if not config.enabled:
        return obs
    h, w = obs.shape[0], obs.shape[1]
    out = obs.copy()
    n = rng.uniform_int(1, config.n_rects_max)
    for _ in range(n):
        x0 = rng.uniform_int(0, w - 1)
        y0 = rng.uniform_int(0, h - 1)
        rw = rng.uniform_int(1, config.rect_w_max)
        rh = rng.uniform_int(1, config.rect_h_max)
        color = (
            rng.uniform_int(0, 255),
            rng.uniform_int(0, 255),
            rng.uniform_int(0, 255),
        )
        out[y0:min(y0 + rh, h), x0:min(x0 + rw, w)] = color
    return out


def expected_cutout_fraction(config: CutoutConfig = CutoutConfig(),
                             width: int = 64, height: int = 64) -> float:
    """Closed-form mean masked-area fraction of apply_cutout.

    Per-pixel cover probability for one rectangle factorizes over axes;
    with n rectangles drawn independently a pixel survives with
    probability (1-p)^n, and n is uniform on 1..n_rects_max.
    """

    def axis_cover(size: int, span_max: int) -> list[float]:
        # P(a <= coord < a + span) for each pixel coordinate
        probs = []
        for pix in range(size):
            hit = 0
            for a in range(size):
                for s in range(1, span_max + 1):
                    if a <= pix < a + s:
                        hit += 1
            probs.append(hit / (size * span_max))
        return probs

    px = axis_cover(width, config.rect_w_max)
    py = axis_cover(height, config.rect_h_max)
    nmax = config.n_rects_max
    total = 0.0
    for cx in px:
        for cy in py:
            p = cx * cy
            covered = sum(1 - (1 - p) ** n for n in range(1, nmax + 1)) / nmax
            total += covered
    return total / (width * height)


def apply_epsilon_greedy(
    action: int, action_space_size: int, rng: Rng, epsilon: float
) -> tuple[int, bool]:
    """With probability epsilon replace the action with a uniformly
    random one.  The override flag reports the replacement draw itself,
    even when the random action equals the original."""
    if not 0 <= action < action_space_size:
        raise ValueError(f"invalid action {action} for space of {action_space_size}")
    if rng.bernoulli(epsilon):
        return rng.uniform_int(0, action_space_size - 1), True
    return action, False


class FrameStack:
    """Keeps the last k observations; reset pads by repeating frame 0.

    ``push`` returns a (k, H, W, C) array, oldest frame first.
    """

    def __init__(self, config: FrameStackConfig = FrameStackConfig()):
        self.k = config.k
        self._frames: list[np.ndarray] = []

    def reset(self, obs: np.ndarray) -> np.ndarray:
        self._frames = [obs] * self.k
        return np.stack(self._frames, axis=0)

    def push(self, obs: np.ndarray) -> np.ndarray:
        if not self._frames:
            return self.reset(obs)
        self._frames = self._frames[1:] + [obs]
        return np.stack(self._frames, axis=0)


def stack_frames(buffer: FrameStack, obs: np.ndarray) -> np.ndarray:
    """Functional form of FrameStack.push."""
    return buffer.push(obs)
