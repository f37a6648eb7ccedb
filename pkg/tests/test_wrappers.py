import numpy as np
import pytest
from scipy import stats

from procbench.errors import ConfigError
from procbench.rng import derive_stream
from procbench.wrappers import (
    CutoutConfig, EpsilonGreedyConfig, FrameStack, FrameStackConfig,
    apply_cutout, apply_epsilon_greedy, expected_cutout_fraction,
)


class ScriptedDraws:
    """uniform_int stub that replays a fixed script (for pinning the
    exact rectangles cutout draws)."""

    def __init__(self, values):
        self.values = list(values)

    def uniform_int(self, lo, hi):
        v = self.values.pop(0)
        assert lo <= v <= hi, f"scripted value {v} outside [{lo}, {hi}]"
        return v


def test_full_mask_paints_everything_one_color():
    obs = np.arange(64 * 64 * 3, dtype=np.uint8).reshape(64, 64, 3)
    rng = ScriptedDraws([1, 0, 0, 64, 64, 7, 8, 9])
    out = apply_cutout(obs, rng, CutoutConfig(n_rects_max=1, rect_w_max=64, rect_h_max=64))
    assert (out == (7, 8, 9)).all(axis=2).all()


def test_pixels_outside_rectangles_untouched():
    obs = np.zeros((64, 64, 3), dtype=np.uint8)
    rng = ScriptedDraws([1, 10, 20, 5, 4, 200, 201, 202])
    out = apply_cutout(obs, rng, CutoutConfig())
    mask = np.zeros((64, 64), dtype=bool)
    mask[20:24, 10:15] = True
    assert (out[mask] == (200, 201, 202)).all()
    assert (out[~mask] == 0).all()
    assert (obs == 0).all()  # input untouched


def test_rectangles_clip_at_the_boundary():
    obs = np.zeros((64, 64, 3), dtype=np.uint8)
    rng = ScriptedDraws([1, 60, 60, 16, 16, 9, 9, 9])
    out = apply_cutout(obs, rng, CutoutConfig())
    assert (out[60:, 60:] == 9).all()
    assert (out[:60, :, :] == 0).all() and (out[:, :60, :] == 0).all()


def test_cutout_shape_preserved_and_disabled_passthrough():
    obs = np.zeros((64, 64, 3), dtype=np.uint8)
    out = apply_cutout(obs, derive_stream(0, 4), CutoutConfig())
    assert out.shape == obs.shape and out.dtype == obs.dtype
    assert apply_cutout(obs, None, CutoutConfig(enabled=False)) is obs


def test_expected_fraction_matches_exhaustive_enumeration():
    # independent oracle for a miniature scheme: enumerate every draw of
    # a single rectangle on a 4x4 image with spans up to 2
    cfg = CutoutConfig(n_rects_max=1, rect_w_max=2, rect_h_max=2)
    size, span = 4, 2
    total = 0.0
    draws = 0
    for x0 in range(size):
        for y0 in range(size):
            for w in range(1, span + 1):
                for h in range(1, span + 1):
                    area = (min(x0 + w, size) - x0) * (min(y0 + h, size) - y0)
                    total += area / (size * size)
                    draws += 1
    assert expected_cutout_fraction(cfg, size, size) == pytest.approx(
        total / draws, abs=1e-12
    )


def test_monte_carlo_masked_fraction_matches_analytic():
    cfg = CutoutConfig()
    rng = derive_stream(5, 4)
    base = np.zeros((64, 64, 3), dtype=np.uint8)
    covered = 0
    trials = 10_000
    for _ in range(trials):
        out = apply_cutout(base, rng, cfg)
        covered += int((out != 0).any(axis=2).sum())
    observed = covered / (trials * 64 * 64)
    expected = expected_cutout_fraction(cfg)
    # random colors hit (0,0,0) on ~1 in 2^24 rectangles; negligible
    assert observed == pytest.approx(expected, abs=0.02)


def test_cutout_config_validation():
    with pytest.raises(ConfigError):
        CutoutConfig(n_rects_max=0)
    with pytest.raises(ConfigError):
        CutoutConfig(n_rects_max=11)
    with pytest.raises(ConfigError):
        CutoutConfig(rect_w_max=0)


def test_epsilon_zero_and_one():
    rng = derive_stream(1, 4)
    assert all(
        apply_epsilon_greedy(2, 7, rng, 0.0) == (2, False) for _ in range(500)
    )
    for _ in range(500):
        action, overridden = apply_epsilon_greedy(2, 7, rng, 1.0)
        assert overridden
        assert 0 <= action < 7


def test_epsilon_one_overrides_uniformly():
    rng = derive_stream(2, 4)
    counts = [0] * 7
    for _ in range(70_000):
        action, _ = apply_epsilon_greedy(3, 7, rng, 1.0)
        counts[action] += 1
    assert stats.chisquare(counts).pvalue > 0.001


def test_override_rate_and_changed_rate():
    rng = derive_stream(3, 4)
    n = 100_000
    overrides = 0
    changed = 0
    for _ in range(n):
        action, overridden = apply_epsilon_greedy(4, 7, rng, 0.2)
        overrides += overridden
        changed += action != 4
    assert abs(overrides / n - 0.2) < 0.01
    # an override can re-draw the original action
    assert abs(changed / n - 0.2 * (1 - 1 / 7)) < 0.01


def test_override_flag_independent_of_action():
    rng = derive_stream(4, 4)
    table = [[0, 0], [0, 0]]
    for i in range(100_000):
        action = i % 2
        _, overridden = apply_epsilon_greedy(action, 7, rng, 0.3)
        table[action][int(overridden)] += 1
    assert stats.chi2_contingency(table).pvalue > 0.001


def test_epsilon_rejects_bad_inputs():
    with pytest.raises(ValueError):
        apply_epsilon_greedy(9, 7, derive_stream(0, 4), 0.5)
    with pytest.raises(ConfigError):
        EpsilonGreedyConfig(epsilon=1.5)


def test_frame_stack_padding_and_order():
    stack = FrameStack(FrameStackConfig(k=4))
    frames = [np.full((64, 64, 3), i, dtype=np.uint8) for i in range(5)]
    first = stack.reset(frames[0])
    assert first.shape == (4, 64, 64, 3)
    assert all(np.array_equal(first[i], frames[0]) for i in range(4))
    out = None
    for f in frames[1:]:
        out = stack.push(f)
    for i, f in enumerate(frames[1:]):
        assert np.array_equal(out[i], f)  # oldest first


def test_frame_stack_k1_is_identity_content():
    stack = FrameStack(FrameStackConfig(k=1))
    frame = np.full((64, 64, 3), 9, dtype=np.uint8)
    out = stack.push(frame)
    assert out.shape == (1, 64, 64, 3)
    assert np.array_equal(out[0], frame)


def test_frame_stack_config_validation():
    with pytest.raises(ConfigError):
        FrameStackConfig(k=0)


def test_stack_frames_function_form():
    import numpy as np

    from procbench.wrappers import stack_frames

    stack = FrameStack(FrameStackConfig(k=2))
    a = np.full((64, 64, 3), 1, dtype=np.uint8)
    b = np.full((64, 64, 3), 2, dtype=np.uint8)
    stack_frames(stack, a)
    out = stack_frames(stack, b)
    assert np.array_equal(out[0], a) and np.array_equal(out[1], b)
