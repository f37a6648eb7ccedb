"""Train/test generalization protocol: disjoint level sets, zero-shot
evaluation, and table-shaped reports."""

from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .errors import ConfigError, InfeasibleError
from .levels import generate
from .outcome import Outcome
from .render import render_maze, render_platformer
from .rng import SEED_SPACE, TAG_EPISODE, TAG_PROTOCOL, derive_stream
from .sim import maze as maze_sim
from .sim import platformer as plat_sim
from .vecenv import LevelSet, sample_level


@dataclass(frozen=True)
class TrainingPreset:
    """Hyperparameters consumed by external trainers through the
    bindings; nothing in this package reads them."""

    gamma: float = 0.999
    lam: float = 0.95
    timesteps_per_rollout: int = 256
    epochs_per_rollout: int = 3
    minibatches_per_epoch: int = 8
    entropy_bonus: float = 0.01
    learning_rate: float = 5e-4
    envs_per_worker: int = 32
    workers: int = 8
    use_memory: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


PRESETS = {
    "coinrun": TrainingPreset(),
    "platforms": TrainingPreset(envs_per_worker=96, use_memory=True),
    "mazes": TrainingPreset(use_memory=True),
}

# the coinrun training-set size grid, ending with the unbounded regime
COINRUN_TRAIN_SIZES: tuple = (
    100, 500, 1000, 2000, 4000, 8000, 12000, 16000, None,
)


@dataclass(frozen=True)
class ProtocolConfig:
    game: str
    train_sizes: tuple = COINRUN_TRAIN_SIZES
    test_size: int = 10_000
    episodes_per_eval: int = 10_000
    master_seed: int = 0


def build_level_sets(
    config: ProtocolConfig, run_index: int, train_size: Optional[int]
) -> tuple[LevelSet, LevelSet]:
    """Disjoint (train, test) sets for one run.

    train_size None selects the unbounded regime: the test set is then
    an explicit distinct sample whose collision probability with the
    2^32 space is tolerated rather than eliminated.
    """
    if train_size is not None and train_size < 1:
        raise ConfigError(f"train_size must be >= 1, got {train_size}")
    if config.test_size < 1:
        raise ConfigError(f"test_size must be >= 1, got {config.test_size}")
    need = (train_size or 0) + config.test_size
    if need > SEED_SPACE:
        raise InfeasibleError(
            f"{need} distinct seeds requested from a 2^32 space"
        )
    rng = derive_stream(
        (config.master_seed + run_index) % SEED_SPACE, TAG_PROTOCOL
    )
    taken: set[int] = set()

    def draw_distinct(count: int) -> list[int]:
        out = []
        while len(out) < count:
            s = rng.uniform_int(0, SEED_SPACE - 1)
            if s in taken:
                continue
            taken.add(s)
            out.append(s)
        return out

    if train_size is None:
        train = LevelSet.unbounded()
    else:
        train = LevelSet.explicit(draw_distinct(train_size))
    test = LevelSet.explicit(draw_distinct(config.test_size))
    return train, test


@dataclass(frozen=True)
class EvalResult:
    game: str
    episodes: int
    mean_return: float
    std_return_across_episodes: float
    success_rate_percent: float
    mean_episode_length: float
    privileged: bool


_SUCCESS_OUTCOMES = (Outcome.COIN_ALL, Outcome.GOAL)


def evaluate(agent, game: str, level_set: LevelSet, episodes: int,
             master_seed: int = 0) -> EvalResult:
    """Zero-shot evaluation: fresh level per episode, no stochastic
    wrappers, no fine-tuning."""
    if episodes < 1:
        raise ConfigError(f"episodes must be >= 1, got {episodes}")
    maze = game == "mazes"
    sim = maze_sim if maze else plat_sim
    rng = derive_stream(master_seed, TAG_EPISODE)
    privileged = bool(agent.privileged)
    pixels = bool(agent.observes_pixels)

    returns = []
    lengths = []
    successes = 0
    for _ in range(episodes):
        seed = sample_level(level_set, rng)
        level = generate(game, seed)
        state = sim.reset(level)
        agent.reset(level if privileged else None)
        ep_return = 0.0
        done = False
        while not done:
            obs = None
            if pixels:
                obs = render_maze(level, state) if maze else render_platformer(level, state)
            info = {"state": state} if privileged else None
            action = agent.act(obs, info)
            _, reward, done = sim.step(state, action)
            ep_return += reward
        returns.append(ep_return)
        lengths.append(state.step_count)
        if state.outcome in _SUCCESS_OUTCOMES:
            successes += 1

    return EvalResult(
        game=game,
        episodes=episodes,
        mean_return=statistics.fmean(returns),
        std_return_across_episodes=(
            statistics.pstdev(returns) if len(returns) > 1 else 0.0
        ),
        success_rate_percent=100.0 * successes / episodes,
        mean_episode_length=statistics.fmean(lengths),
        privileged=privileged,
    )


def primary_metric(result: EvalResult) -> float:
    """Success rate for coinrun/mazes, mean return for platforms,
    mirroring the scales the report tables use."""
    if result.game == "platforms":
        return result.mean_return
    return result.success_rate_percent


@dataclass(frozen=True)
class RunRecord:
    """One (size, run, split) measurement; the raw report row format."""

    game: str
    size: Optional[int]   # None encodes the unbounded regime
    run: int
    split: str            # "train" or "test"
    mean: float
    std: float
    success_pct: float
    episodes: int


CSV_COLUMNS = ("game", "size", "run", "split", "mean", "std",
               "success_pct", "episodes")


def run_record(result: EvalResult, size: Optional[int], run: int,
               split: str) -> RunRecord:
    return RunRecord(
        game=result.game,
        size=size,
        run=run,
        split=split,
        mean=primary_metric(result),
        std=result.std_return_across_episodes,
        success_pct=result.success_rate_percent,
        episodes=result.episodes,
    )


def _size_str(size: Optional[int]) -> str:
    return "inf" if size is None else str(size)


def _size_parse(raw) -> Optional[int]:
    if raw in ("inf", None):
        return None
    return int(raw)


def records_to_csv(records: Sequence[RunRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([
            r.game, _size_str(r.size), r.run, r.split,
            repr(r.mean), repr(r.std), repr(r.success_pct), r.episodes,
        ])
    return buf.getvalue()


def records_from_csv(text: str) -> list[RunRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header: {header}")
    return [
        RunRecord(
            game=row[0], size=_size_parse(row[1]), run=int(row[2]),
            split=row[3], mean=float(row[4]), std=float(row[5]),
            success_pct=float(row[6]), episodes=int(row[7]),
        )
        for row in reader
    ]


def records_to_json(records: Sequence[RunRecord]) -> str:
    return json.dumps(
        [
            {**asdict(r), "size": _size_str(r.size)}
            for r in records
        ],
        indent=2,
        sort_keys=True,
    )


def records_from_json(text: str) -> list[RunRecord]:
    return [
        RunRecord(**{**obj, "size": _size_parse(obj["size"])})
        for obj in json.loads(text)
    ]


@dataclass(frozen=True)
class GapRow:
    """Aggregate of one train-set size across runs; std is across runs."""

    game: str
    size: Optional[int]
    train_mean: float
    train_std: float
    test_mean: float
    test_std: float
    gap: float
    runs: int
    episodes: int


def gap_report(results_per_size: dict) -> list[GapRow]:
    """Aggregate {size: [(train EvalResult, test EvalResult), ...]} into
    table rows.  Privileged agents are refused: their results must never
    enter generalization reports."""
    rows = []
    for size, runs in sorted(
        results_per_size.items(), key=lambda kv: (kv[0] is None, kv[0] or 0)
    ):
        if not runs:
            raise ConfigError(f"no runs recorded for size {size}")
        for train_res, test_res in runs:
            if train_res.privileged or test_res.privileged:
                raise ConfigError(
                    "privileged agents are excluded from generalization reports"
                )
        train_means = [primary_metric(t) for t, _ in runs]
        test_means = [primary_metric(t) for _, t in runs]
        train_mean = statistics.fmean(train_means)
        test_mean = statistics.fmean(test_means)
        rows.append(GapRow(
            game=runs[0][0].game,
            size=size,
            train_mean=train_mean,
            train_std=statistics.pstdev(train_means) if len(runs) > 1 else 0.0,
            test_mean=test_mean,
            test_std=statistics.pstdev(test_means) if len(runs) > 1 else 0.0,
            gap=train_mean - test_mean,
            runs=len(runs),
            episodes=sum(t.episodes + u.episodes for t, u in runs),
        ))
    return rows


def report_to_csv(rows: Sequence[GapRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow((
        "game", "size", "train_mean", "train_std", "test_mean", "test_std",
        "gap", "runs", "episodes",
    ))
    for r in rows:
        writer.writerow([
            r.game, _size_str(r.size), repr(r.train_mean), repr(r.train_std),
            repr(r.test_mean), repr(r.test_std), repr(r.gap), r.runs,
            r.episodes,
        ])
    return buf.getvalue()


def report_to_json(rows: Sequence[GapRow]) -> str:
    return json.dumps(
        [{**asdict(r), "size": _size_str(r.size)} for r in rows],
        indent=2,
        sort_keys=True,
    )


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    if s.endswith("0") and "." in s and not s.endswith(".00"):
        s = s[:-1]
    elif s.endswith(".00"):
        s = s[:-1]
    return s


def format_value_pair(mean: float, std: float) -> str:
    return f"{_fmt(mean)} ± {_fmt(std)}"


def format_table(rows: Sequence[GapRow]) -> str:
    """Plain-text table mirroring the report layout: one row per size,
    train and test columns as mean ± std, 'inf' for the unbounded row."""
    header = ("# Levels", "Train", "Test", "Gap")
    body = [
        (
            _size_str(r.size),
            format_value_pair(r.train_mean, r.train_std),
            format_value_pair(r.test_mean, r.test_std),
            _fmt(r.gap),
        )
        for r in rows
    ]
    widths = [
        max(len(header[i]), *(len(b[i]) for b in body)) if body else len(header[i])
        for i in range(4)
    ]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header))]
    for b in body:
        lines.append("  ".join(b[i].ljust(widths[i]) for i in range(4)))
    return "\n".join(lines) + "\n"
