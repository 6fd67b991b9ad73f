import warnings

import numpy as np
import pytest

from delegation_games import (
    DelegationGame,
    DelegationWarning,
    GeneratorSpec,
    admissible_outcomes,
    normalize,
    random_delegation_game,
    welfare_landmarks,
)
from delegation_games.errors import InvalidArgumentError
from delegation_games.sweep import SweepConfig, rows_from_csv, rows_to_csv, sweep

from conftest import spearman


@pytest.fixture(scope="module")
def cc_rows():
    config = SweepConfig(varied_measure="cc", steps=5, games_per_step=8, seed=13)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DelegationWarning)
        return sweep(config)


def test_sweep_row_invariants(cc_rows):
    assert cc_rows
    for row in cc_rows:
        assert -1e-9 <= row.mean_principal_welfare_norm <= 1 + 1e-9
        assert -1e-9 <= row.w_hat_star_norm <= 1 + 1e-9
        assert -1e-9 <= row.w_hat_bullet_norm <= 1 + 1e-9
        assert row.mean_principal_welfare_norm <= row.w_hat_star_norm + 1e-9
        regret = row.w_hat_star_norm - row.mean_principal_welfare_norm
        assert regret <= row.thm1_bound_norm + 1e-9
        assert 1.0 - row.w_hat_star_norm <= row.prop4_bound_norm + 1e-9
        assert row.ci_lo <= row.ci_hi


def test_sweep_ci_shared_within_step(cc_rows):
    by_value = {}
    for row in cc_rows:
        by_value.setdefault(row.value, set()).add((row.ci_lo, row.ci_hi))
    assert all(len(cis) == 1 for cis in by_value.values())


def test_sweep_determinism():
    config = SweepConfig(varied_measure="ia", steps=3, games_per_step=3, seed=5)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DelegationWarning)
        first = sweep(config)
        second = sweep(config)
    assert rows_to_csv(first) == rows_to_csv(second)


def test_csv_round_trip(cc_rows):
    text = rows_to_csv(cc_rows)
    assert rows_from_csv(text) == list(cc_rows)
    with pytest.raises(InvalidArgumentError):
        rows_from_csv("not,a,header\n")


def test_sweep_positive_trend():
    config = SweepConfig(varied_measure="ia", steps=6, games_per_step=10, seed=11)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DelegationWarning)
        rows = sweep(config)
    means = {}
    for row in rows:
        means.setdefault(row.value, []).append(row.mean_principal_welfare_norm)
    values = sorted(means)
    assert spearman(values, [np.mean(means[v]) for v in values]) > 0


def test_config_validation():
    with pytest.raises(InvalidArgumentError):
        SweepConfig(varied_measure="welfare")
    with pytest.raises(InvalidArgumentError):
        SweepConfig(varied_measure="ia", steps=1)
    with pytest.raises(InvalidArgumentError):
        SweepConfig(varied_measure="ia", fixed_value=1.2)


def test_perfect_measures_with_equal_ratios_reach_optimum():
    # with every measure at 1 and forced equal magnitude ratios, the admissible
    # outcomes are exactly the principal-optimal ones
    rng = np.random.default_rng(77)
    for _ in range(20):
        spec = GeneratorSpec(
            players=2, strategy_counts=(3, 3), target_ia=(1.0, 1.0),
            target_principal_ca=1.0, seed=int(rng.integers(2**32)),
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DelegationWarning)
            raw = random_delegation_game(spec)
        # recalibrate: agents inherit their principal's magnitude exactly
        agents = np.array(
            [normalize(p).magnitude * normalize(a).direction for a, p in
             zip(raw.agent_payoffs, raw.principal_payoffs)]
        )
        game = DelegationGame(raw.strategy_counts, agents, raw.principal_payoffs)
        outcomes = admissible_outcomes(game, np.zeros(2), 1.0)
        assert outcomes
        mean_welfare = float(np.mean([game.principal_welfare(p) for p in outcomes]))
        assert mean_welfare == pytest.approx(
            welfare_landmarks(game.principal_payoffs).w_star, abs=1e-6
        )
