import pytest

from procbench.agents import MazeOracleAgent, NoopAgent, RandomAgent
from procbench.benchmark import (
    COINRUN_TRAIN_SIZES, PRESETS, EvalResult, GapRow, ProtocolConfig,
    build_level_sets, evaluate, format_table, gap_report, primary_metric,
    records_from_csv, records_from_json, records_to_csv, records_to_json,
    report_to_csv, report_to_json, run_record,
)
from procbench.errors import ConfigError, InfeasibleError
from procbench.rng import TAG_AUGMENT, derive_stream
from procbench.vecenv import LevelSet


def small_config(**kw):
    defaults = dict(game="coinrun", train_sizes=(50, 100), test_size=200,
                    episodes_per_eval=10, master_seed=3)
    defaults.update(kw)
    return ProtocolConfig(**defaults)


def test_presets_mirror_the_hyperparameter_table():
    for game in ("coinrun", "platforms", "mazes"):
        p = PRESETS[game]
        assert p.gamma == 0.999
        assert p.lam == 0.95
        assert p.timesteps_per_rollout == 256
        assert p.epochs_per_rollout == 3
        assert p.minibatches_per_epoch == 8
        assert p.entropy_bonus == 0.01
        assert p.learning_rate == 5e-4
        assert p.workers == 8
    assert PRESETS["coinrun"].envs_per_worker == 32
    assert PRESETS["platforms"].envs_per_worker == 96
    assert PRESETS["mazes"].envs_per_worker == 32
    assert not PRESETS["coinrun"].use_memory
    assert PRESETS["platforms"].use_memory
    assert PRESETS["mazes"].use_memory


def test_coinrun_grid_matches_report_sizes():
    assert COINRUN_TRAIN_SIZES == (
        100, 500, 1000, 2000, 4000, 8000, 12000, 16000, None,
    )


def test_level_sets_disjoint_and_sized():
    config = small_config()
    for size in (50, 100):
        train, test = build_level_sets(config, run_index=0, train_size=size)
        assert len(train.seeds) == size
        assert len(test.seeds) == config.test_size
        assert not set(train.seeds) & set(test.seeds)


def test_runs_draw_different_train_sets():
    config = small_config()
    t0, _ = build_level_sets(config, 0, 50)
    t1, _ = build_level_sets(config, 1, 50)
    assert set(t0.seeds) != set(t1.seeds)


def test_unbounded_train_still_gets_explicit_test():
    train, test = build_level_sets(small_config(), 0, None)
    assert train.is_unbounded
    assert len(set(test.seeds)) == len(test.seeds) == 200


def test_infeasible_seed_demand_raises():
    config = small_config(test_size=1)
    with pytest.raises(InfeasibleError):
        build_level_sets(config, 0, 2**32)


def test_noop_agent_scores_zero_on_coinrun():
    result = evaluate(NoopAgent(), "coinrun", LevelSet.unbounded(), 20)
    assert result.success_rate_percent == 0.0
    assert result.mean_return == 0.0
    assert result.mean_episode_length == 1000.0


def test_oracle_agent_scores_perfectly_on_mazes():
    result = evaluate(MazeOracleAgent(), "mazes", LevelSet.unbounded(), 50)
    assert result.success_rate_percent == 100.0
    assert result.mean_return == 10.0
    assert result.privileged


def test_evaluation_is_deterministic():
    def run():
        agent = RandomAgent(4, derive_stream(1, TAG_AUGMENT))
        return evaluate(agent, "mazes", LevelSet.unbounded(), 100, master_seed=5)

    assert run() == run()


def test_evaluate_rejects_zero_episodes():
    with pytest.raises(ConfigError):
        evaluate(NoopAgent(), "coinrun", LevelSet.unbounded(), 0)


def _result(game="coinrun", mean_return=5.0, success=50.0, privileged=False):
    return EvalResult(
        game=game, episodes=10, mean_return=mean_return,
        std_return_across_episodes=1.0, success_rate_percent=success,
        mean_episode_length=100.0, privileged=privileged,
    )


def test_primary_metric_by_game():
    assert primary_metric(_result(game="coinrun", success=80.0)) == 80.0
    assert primary_metric(_result(game="mazes", success=65.0)) == 65.0
    assert primary_metric(_result(game="platforms", mean_return=12.5)) == 12.5


def test_gap_report_degenerate_split_has_zero_gap():
    same = _result(success=62.5)
    rows = gap_report({100: [(same, same)]})
    assert rows[0].gap == 0.0
    assert rows[0].train_mean == rows[0].test_mean == 62.5


def test_gap_report_refuses_privileged_results():
    priv = _result(privileged=True)
    with pytest.raises(ConfigError):
        gap_report({100: [(priv, _result())]})


def test_gap_report_std_across_runs():
    runs = [
        (_result(success=90.0), _result(success=70.0)),
        (_result(success=94.0), _result(success=74.0)),
    ]
    rows = gap_report({500: runs})
    assert rows[0].train_mean == 92.0
    assert rows[0].test_mean == 72.0
    assert rows[0].train_std == 2.0  # population std across runs
    assert rows[0].gap == 20.0
    assert rows[0].runs == 2


def test_records_round_trip_csv_and_json():
    records = [
        run_record(_result(success=66.79), 100, run, split)
        for run in range(2) for split in ("train", "test")
    ] + [run_record(_result(), None, 0, "test")]
    csv_text = records_to_csv(records)
    assert csv_text.splitlines()[0] == "game,size,run,split,mean,std,success_pct,episodes"
    assert records_from_csv(csv_text) == records
    assert records_from_json(records_to_json(records)) == records
    # the two serializations agree with each other
    assert records_from_csv(csv_text) == records_from_json(records_to_json(records))


def test_report_serializations_include_inf_row():
    rows = [
        GapRow("coinrun", 100, 99.45, 0.09, 66.79, 1.09, 32.66, 5, 100000),
        GapRow("coinrun", None, 90.87, 0.53, 90.04, 0.9, 0.83, 5, 100000),
    ]
    csv_text = report_to_csv(rows)
    assert ",inf," in csv_text
    assert '"size": "inf"' in report_to_json(rows)


def test_formatter_reproduces_report_layout():
    rows = [
        GapRow("coinrun", 100, 99.45, 0.09, 66.79, 1.09, 32.66, 5, 0),
        GapRow("coinrun", 500, 97.85, 0.46, 70.54, 0.62, 27.31, 5, 0),
        GapRow("coinrun", None, 90.87, 0.53, 90.04, 0.9, 0.83, 5, 0),
    ]
    table = format_table(rows)
    lines = table.splitlines()
    assert lines[0].split() == ["#", "Levels", "Train", "Test", "Gap"]
    assert "99.45 ± 0.09" in lines[1] and "66.79 ± 1.09" in lines[1]
    assert "97.85 ± 0.46" in lines[2] and "70.54 ± 0.62" in lines[2]
    assert lines[3].startswith("inf")
    assert "90.04 ± 0.9" in lines[3]
