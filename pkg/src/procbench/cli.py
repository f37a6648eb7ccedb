"""Command-line entry point: gen, render, validate, eval, bench-throughput.

Every subcommand prints its effective configuration (one JSON line)
before doing any work; re-running with the same configuration
reproduces all outputs byte for byte.  Exit codes: 0 success, 1 check
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import benchmark
from .agents import (
    MazeOracleAgent, NoopAgent, RandomAgent, ScriptedRunner,
    certify_max_return, physics_search_oracle,
)
from .errors import ProcbenchError
from .levels import generate, serialize_level, shortest_path_length
from .render import render_maze, render_platformer, write_ppm
from .rng import SEED_SPACE, TAG_AUGMENT, TAG_EPISODE, derive_stream
from .sim import maze as maze_sim
from .sim import platformer as plat_sim
from .vecenv import GAMES, LevelSet, VecEnv, action_space_size

SEED_ENV_VAR = "PROCBENCH_SEED"


def _load_config_file(path: str) -> dict:
    text = Path(path).read_bytes()
    if path.endswith(".toml"):
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        return tomllib.loads(text.decode())
    return json.loads(text)


def _master_seed(args) -> int:
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        return int(env) % SEED_SPACE
    return args.master_seed % SEED_SPACE


def _print_config(subcommand: str, **kwargs) -> None:
    print(f"config: {json.dumps({'subcommand': subcommand, **kwargs}, sort_keys=True)}")


def _parse_level_set(spec: str) -> LevelSet:
    if spec == "unbounded":
        return LevelSet.unbounded()
    return LevelSet.explicit(int(s) for s in spec.split(","))


def cmd_gen(args) -> int:
    seed = args.seed % SEED_SPACE
    _print_config("gen", game=args.game, seed=seed, out=args.out)
    text = serialize_level(generate(args.game, seed))
    if args.out == "-":
        print(text)
    else:
        Path(args.out).write_text(text + "\n")
    return 0


def cmd_render(args) -> int:
    seed = args.seed % SEED_SPACE
    master = _master_seed(args)
    actions = None
    if args.actions:
        actions = [int(a) for a in args.actions.split(",")]
    _print_config(
        "render", game=args.game, seed=seed, steps=args.steps,
        actions=args.actions or None, policy_seed=master,
        velocity=args.velocity, out_dir=args.out_dir,
    )
    level = generate(args.game, seed)
    maze = args.game == "mazes"
    sim = maze_sim if maze else plat_sim
    state = sim.reset(level)
    rng = derive_stream(master, TAG_EPISODE)
    n_actions = action_space_size(args.game)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    def frame():
        if maze:
            return render_maze(level, state)
        return render_platformer(level, state, paint_velocity=args.velocity)

    write_ppm(frame(), out / "frame_00000.ppm")
    for i in range(1, args.steps + 1):
        if state.done:
            break
        if actions is not None:
            action = actions[(i - 1) % len(actions)]
        else:
            action = rng.uniform_int(0, n_actions - 1)
        sim.step(state, action)
        write_ppm(frame(), out / f"frame_{i:05d}.ppm")
    return 0


def _validate_mazes(n_seeds: int) -> tuple[int, list[str]]:
    from .levels import generate_maze

    ok = 0
    failures = []
    for seed in range(n_seeds):
        level = generate_maze(seed)
        corridor = level.corridor_cells()
        edges = 0
        cset = set(corridor)
        for (r, c) in corridor:
            if (r, c + 1) in cset:
                edges += 1
            if (r + 1, c) in cset:
                edges += 1
        tree = edges == len(corridor) - 1
        dist = shortest_path_length(level, level.agent_start, level.goal)
        if tree and dist < maze_sim.STEP_LIMIT:
            ok += 1
        else:
            failures.append(f"maze seed {seed}: tree={tree} dist={dist}")
    return ok, failures


def _validate_coinrun(n_seeds: int) -> tuple[int, list[str]]:
    ok = 0
    failures = []
    for seed in range(n_seeds):
        result = physics_search_oracle(generate("coinrun", seed))
        if result.solved:
            ok += 1
        else:
            failures.append(f"coinrun seed {seed}: {result.status}")
    return ok, failures


def _validate_platforms(n_seeds: int) -> tuple[int, list[str]]:
    ok = 0
    failures = []
    for seed in range(n_seeds):
        level = generate("platforms", seed)
        if certify_max_return(level) == level.coin_count + 9:
            ok += 1
        else:
            failures.append(f"platforms seed {seed}: coin unreachable")
    return ok, failures


def cmd_validate(args) -> int:
    _print_config("validate", game=args.game, seeds=args.seeds)
    checks = {
        "mazes": _validate_mazes,
        "coinrun": _validate_coinrun,
        "platforms": _validate_platforms,
    }
    ok, failures = checks[args.game](args.seeds)
    print(f"{args.game}: {ok}/{args.seeds} levels valid")
    for line in failures[:20]:
        print(f"  FAIL {line}", file=sys.stderr)
    return 0 if not failures else 1


def _make_agent(name: str, game: str, master_seed: int):
    n_actions = action_space_size(game)
    if name == "random":
        # distinct tag so action draws stay uncorrelated with the
        # evaluator's level sampling stream
        return RandomAgent(n_actions, derive_stream(master_seed, TAG_AUGMENT))
    if name == "noop":
        return NoopAgent()
    if name == "bfs-oracle":
        if game != "mazes":
            raise ProcbenchError("bfs-oracle only plays mazes")
        return MazeOracleAgent()
    if name == "scripted-runner":
        if game != "coinrun":
            raise ProcbenchError("scripted-runner only plays coinrun")
        return ScriptedRunner()
    raise ProcbenchError(f"unknown agent: {name}")


def cmd_eval(args) -> int:
    master = _master_seed(args)
    _print_config(
        "eval", game=args.game, agent=args.agent, episodes=args.episodes,
        levels=args.levels, master_seed=master, out=args.out,
    )
    agent = _make_agent(args.agent, args.game, master)
    level_set = _parse_level_set(args.levels)
    result = benchmark.evaluate(
        agent, args.game, level_set, args.episodes, master_seed=master
    )
    record = benchmark.run_record(result, None if level_set.is_unbounded
                                  else len(level_set.seeds), 0, "test")
    csv_text = benchmark.records_to_csv([record])
    json_text = benchmark.records_to_json([record])
    Path(f"{args.out}.csv").write_text(csv_text)
    Path(f"{args.out}.json").write_text(json_text + "\n")
    print(
        f"game={args.game} agent={args.agent} episodes={args.episodes} "
        f"mean_return={result.mean_return:.4f} "
        f"success_pct={result.success_rate_percent:.2f} "
        f"mean_len={result.mean_episode_length:.1f}"
    )
    return 0


def cmd_bench_throughput(args) -> int:
    master = _master_seed(args)
    _print_config(
        "bench-throughput", game=args.game, batch=args.batch,
        steps=args.steps, master_seed=master,
    )
    rng = derive_stream(master, TAG_EPISODE)
    n_actions = action_space_size(args.game)
    for render in (False, True):
        venv = VecEnv(args.game, args.batch, LevelSet.unbounded(), master,
                      render_observations=render)
        actions = [
            [rng.uniform_int(0, n_actions - 1) for _ in range(args.batch)]
            for _ in range(args.steps)
        ]
        start = time.perf_counter()
        for batch_actions in actions:
            venv.step_batch(batch_actions)
        elapsed = time.perf_counter() - start
        rate = args.steps * args.batch / elapsed
        print(
            f"game={args.game} batch={args.batch} "
            f"render={'true' if render else 'false'} steps_per_sec={rate:.1f}"
        )
    return 0


_UNSET = object()

# hard defaults for the options a --config file may supply; explicit
# command-line values always win
_DEFAULTS = {
    "out": "-",
    "steps": 0,
    "actions": None,
    "master_seed": 0,
    "out_dir": None,
    "seeds": 100,
    "episodes": 1000,
    "levels": "unbounded",
    "batch": 64,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="procbench",
        description="Deterministic procedural environments and benchmark harness",
    )
    parser.add_argument("--config", help="TOML or JSON file with argument defaults")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gen", help="generate a level and write its JSON")
    p.add_argument("--game", choices=GAMES, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=_UNSET, help="output path, '-' for stdout")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("render", help="replay actions and write PPM frames")
    p.add_argument("--game", choices=GAMES, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--steps", type=int, default=_UNSET)
    p.add_argument("--actions", default=_UNSET, help="comma-separated action cycle")
    p.add_argument("--master-seed", type=int, default=_UNSET,
                   help="random-policy seed when --actions is absent")
    p.add_argument("--velocity", action="store_true",
                   help="paint velocity squares (platformer games)")
    p.add_argument("--out-dir", default=_UNSET)
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("validate", help="run per-game invariant checks")
    p.add_argument("--game", choices=GAMES, required=True)
    p.add_argument("--seeds", type=int, default=_UNSET)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("eval", help="evaluate a built-in agent")
    p.add_argument("--game", choices=GAMES, required=True)
    p.add_argument("--agent", required=True,
                   choices=["random", "noop", "bfs-oracle", "scripted-runner"])
    p.add_argument("--episodes", type=int, default=_UNSET)
    p.add_argument("--levels", default=_UNSET,
                   help="'unbounded' or comma-separated seeds")
    p.add_argument("--master-seed", type=int, default=_UNSET)
    p.add_argument("--out", default="eval_report",
                   help="output path prefix for .csv/.json")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("bench-throughput", help="measure stepping rate")
    p.add_argument("--game", choices=GAMES, required=True)
    p.add_argument("--batch", type=int, default=_UNSET)
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--master-seed", type=int, default=_UNSET)
    p.set_defaults(fn=cmd_bench_throughput)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = _load_config_file(args.config) if args.config else {}
    for key, value in list(vars(args).items()):
        if value is _UNSET:
            config_key = key.replace("_", "-")
            if config_key in overrides:
                setattr(args, key, overrides[config_key])
            elif key in overrides:
                setattr(args, key, overrides[key])
            else:
                setattr(args, key, _DEFAULTS[key])
    if getattr(args, "out_dir", None) is None and args.subcommand == "render":
        parser.error("render requires --out-dir")
    try:
        return args.fn(args)
    except ProcbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
