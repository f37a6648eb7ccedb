import pytest
from conftest import coinrun_level, flat_grid
from scipy import stats

from procbench.agents import (
    INCONCLUSIVE, SOLVED, UNSOLVABLE, MazeOracleAgent, NoopAgent, RandomAgent,
    ScriptedRunner, certify_max_return, maze_path_actions,
    physics_search_oracle, reach_all_coins, run_policy_trace,
)
from procbench.levels import generate_coinrun, generate_maze, generate_platforms
from procbench.outcome import Outcome
from procbench.rng import derive_stream
from procbench.sim import maze as msim
from procbench.sim import platformer as plat


def test_random_agent_uniform_and_deterministic():
    agent = RandomAgent(7, derive_stream(0, 3))
    counts = [0] * 7
    for _ in range(100_000):
        counts[agent.act(None)] += 1
    assert stats.chisquare(counts).pvalue > 0.001
    a = RandomAgent(7, derive_stream(1, 3))
    b = RandomAgent(7, derive_stream(1, 3))
    assert [a.act(None) for _ in range(100)] == [b.act(None) for _ in range(100)]


def test_noop_agent_is_constant():
    agent = NoopAgent()
    assert all(agent.act(None) == 0 for _ in range(10))


def test_maze_oracle_solves_and_is_optimal():
    for seed in range(300):
        level = generate_maze(seed)
        path = maze_path_actions(level)
        agent = MazeOracleAgent()
        agent.reset(level)
        state = msim.reset(level)
        while not state.done:
            msim.step(state, agent.act(None))
        assert state.outcome is Outcome.GOAL
        assert state.step_count == len(path) < 500


def test_maze_oracle_short_paths_on_dim3():
    found = 0
    seed = 0
    while found < 10:
        level = generate_maze(seed)
        if level.dim == 3:
            found += 1
            assert len(maze_path_actions(level)) <= 6
        seed += 1


def test_scripted_runner_solves_flat_level_in_kinematic_time():
    width = 40
    level = coinrun_level(flat_grid(width), coin=(width - 1, 2))
    trace = run_policy_trace(level, ScriptedRunner())
    assert trace is not None
    # distance / max speed, plus the short acceleration ramp
    distance_tiles = width - 1
    assert len(trace) <= distance_tiles / 0.5 + 10


def test_scripted_runner_difficulty_one_rate():
    solved = 0
    total = 0
    seed = 0
    while total < 100:
        level = generate_coinrun(seed)
        seed += 1
        if level.difficulty != 1:
            continue
        total += 1
        if run_policy_trace(level, ScriptedRunner()) is not None:
            solved += 1
    assert solved >= 93  # acceptance pins >= 95% over 500 seeds


def test_search_oracle_solves_and_witnesses_replay():
    for seed in range(10):
        level = generate_coinrun(seed)
        result = physics_search_oracle(level)
        assert result.status == SOLVED
        state = plat.reset(level)
        total = 0.0
        for action in result.actions:
            _, r, done = plat.step(state, action)
            total += r
            if done:
                break
        assert state.outcome is Outcome.COIN_ALL
        assert total == 10.0
        assert state.step_count <= 1000


def test_search_oracle_proves_wide_gap_unsolvable():
    # a six-tile gap exceeds the five-tile jump range
    level = coinrun_level(
        flat_grid(20, gaps=(8, 9, 10, 11, 12, 13)), coin=(19, 2)
    )
    result = physics_search_oracle(level)
    assert result.status == UNSOLVABLE


def test_search_oracle_budget_exhaustion_is_inconclusive():
    level = coinrun_level(
        flat_grid(20, gaps=(8, 9, 10, 11, 12, 13)), coin=(19, 2)
    )
    result = physics_search_oracle(level, budget=50)
    assert result.status == INCONCLUSIVE
    assert not result.solved


def test_search_oracle_rejects_horizon_beyond_limit():
    with pytest.raises(ValueError):
        physics_search_oracle(generate_coinrun(0), horizon=2000)


def test_platforms_full_clear_witness():
    level = generate_platforms(0)
    result = physics_search_oracle(level)
    assert result.solved
    state = plat.reset(level)
    total = 0.0
    for action in result.actions:
        _, r, done = plat.step(state, action)
        total += r
        if done:
            break
    assert state.outcome is Outcome.COIN_ALL
    assert total == level.coin_count + 9


def test_reach_all_coins_traces_replay_safely():
    for seed in (1, 2, 3):
        level = generate_platforms(seed)
        traces = reach_all_coins(level)
        assert traces is not None
        assert set(traces) == set(level.coin_positions)
        for coin, actions in traces.items():
            state = plat.reset(level)
            for action in actions:
                _, _, done = plat.step(state, action)
                if coin not in state.coins:
                    break
                if done:
                    break
            assert coin not in state.coins
            assert state.outcome is not Outcome.DEATH


def test_certify_max_return_matches_coin_count():
    for seed in range(10):
        level = generate_platforms(seed)
        assert certify_max_return(level) == level.coin_count + 9


def test_privileged_flags():
    assert not RandomAgent(7, derive_stream(0, 3)).privileged
    assert not NoopAgent().privileged
    assert MazeOracleAgent().privileged
    assert ScriptedRunner().privileged
