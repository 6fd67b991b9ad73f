import numpy as np
import pytest

from delegation_games import (
    DelegationWarning,
    GeneratorSpec,
    InvalidArgumentError,
    UnsupportedNormError,
    adjust_collective_alignment,
    collective_alignment,
    direction_at_distance,
    individual_alignment,
    make_fragile_game,
    make_prisoners_dilemma,
    make_travellers_dilemma,
    make_worked_example,
    norm_distance,
    pure_eps_nash,
    random_delegation_game,
    sample_direction,
    welfare_landmarks,
)
from delegation_games.normalization import DEFAULT_CONFIG, NormalizationConfig, normalize, shift

LINF = NormalizationConfig(shift_kind="midrange", norm_kind="linf")


def test_worked_example_payoffs():
    game = make_worked_example()
    assert tuple(game.agent_payoffs[:, game.index((0, 0))]) == (3, 3)
    assert tuple(game.agent_payoffs[:, game.index((0, 1))]) == (6, 2)
    assert tuple(game.principal_payoffs[:, game.index((1, 0))]) == (4, 6)


def test_prisoners_dilemma_payoffs():
    game = make_prisoners_dilemma(0.1)
    assert tuple(game.agent_payoffs[:, game.index((1, 1))]) == (0.05, 0.05)
    assert tuple(game.agent_payoffs[:, game.index((0, 1))]) == (0.0, 1.0)
    np.testing.assert_array_equal(game.agent_payoffs, game.principal_payoffs)
    with pytest.raises(InvalidArgumentError):
        make_prisoners_dilemma(1.0)


def test_fragile_game_payoffs():
    game = make_fragile_game(0.2, 0.2, 0.5)
    assert tuple(game.agent_payoffs[:, game.index((1, 1))]) == (0.4, 0.4)
    assert tuple(game.agent_payoffs[:, game.index((0, 0))]) == (1.0, 1.0)
    assert game.agent_payoffs[0, game.index((1, 0))] == pytest.approx(0.8)
    with pytest.raises(InvalidArgumentError):
        make_fragile_game(0.0, 0.5, 0.5)


def test_travellers_dilemma_structure():
    for k in (2, 3, 7):
        game = make_travellers_dilemma(k)
        x = 1.0 / (k + 1)
        assert game.strategy_counts == (k, k)
        assert game.agent_payoffs[0, game.index((0, 0))] == pytest.approx(1 - x)
        assert game.agent_payoffs[0, game.index((k - 1, k - 1))] == pytest.approx(x)
        nash = pure_eps_nash(game, np.zeros(2))
        assert nash.profiles == ((k - 1, k - 1),)
        lm = welfare_landmarks(game.principal_payoffs)
        assert (lm.w_plus, lm.w_minus) == (1.0, 0.0)


def test_travellers_dilemma_trend():
    cas, ratios = [], []
    for k in (3, 10, 50):
        game = make_travellers_dilemma(k)
        cas.append(collective_alignment(game.agent_payoffs))
        lm = welfare_landmarks(game.principal_payoffs)
        ne = (k - 1, k - 1)
        ratios.append((lm.w_star - game.principal_welfare(ne)) / (lm.w_plus - lm.w_minus))
    assert cas[0] < cas[1] < cas[2]
    assert ratios[0] < ratios[1] < ratios[2]
    assert cas[2] - cas[0] >= 0.05


def test_sample_direction_postconditions():
    rng = np.random.default_rng(41)
    for cfg in (DEFAULT_CONFIG, LINF):
        for _ in range(50):
            d = sample_direction(8, cfg, rng)
            assert abs(shift(d, cfg)) < 1e-9
            assert abs(np.abs(d).max() if cfg.norm_kind == "linf" else np.linalg.norm(d)) == pytest.approx(1, abs=1e-9)
    a = sample_direction(8, DEFAULT_CONFIG, rng)
    b = sample_direction(8, DEFAULT_CONFIG, rng)
    assert norm_distance(a, b) > 0
    with pytest.raises(InvalidArgumentError):
        sample_direction(1, DEFAULT_CONFIG, rng)


def test_sample_direction_is_centered():
    rng = np.random.default_rng(42)
    draws = np.array([sample_direction(6, DEFAULT_CONFIG, rng) for _ in range(100_000)])
    assert np.abs(draws.mean(axis=0)).max() < 0.02


def test_direction_at_distance():
    rng = np.random.default_rng(43)
    reference = sample_direction(10, DEFAULT_CONFIG, rng)
    np.testing.assert_array_equal(direction_at_distance(reference, 0.0, rng=rng), reference)
    np.testing.assert_array_equal(direction_at_distance(reference, 2.0, rng=rng), -reference)
    orthogonal = direction_at_distance(reference, np.sqrt(2.0), rng=rng)
    assert norm_distance(reference, orthogonal) == pytest.approx(np.sqrt(2), abs=1e-9)
    assert abs(reference @ orthogonal) < 1e-9
    for target in rng.uniform(0, 2, 25):
        v = direction_at_distance(reference, float(target), rng=rng)
        assert norm_distance(reference, v) == pytest.approx(target, abs=1e-9)
        assert abs(np.linalg.norm(v) - 1) < 1e-9
        assert abs(v.mean()) < 1e-9
    with pytest.raises(UnsupportedNormError):
        direction_at_distance(reference, 0.5, LINF, rng)


def test_adjust_collective_alignment():
    rng = np.random.default_rng(44)
    magnitudes = np.array([1.0, 2.0])
    directions = [sample_direction(12, rng=rng) for _ in range(2)]

    def ca(dirs):
        return collective_alignment(np.array([m * d for m, d in zip(magnitudes, dirs)]))

    onto_mean = adjust_collective_alignment(directions, magnitudes, 1.0, rng=rng)
    assert ca(onto_mean) == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(onto_mean[0], onto_mean[1], atol=1e-12)

    unchanged = adjust_collective_alignment(directions, magnitudes, ca(directions), rng=rng)
    assert ca(unchanged) == pytest.approx(ca(directions), abs=1e-6)

    adjusted = adjust_collective_alignment(directions, magnitudes, 0.5, rng=rng)
    assert ca(adjusted) == pytest.approx(0.5, abs=1e-6)


def test_adjust_collective_alignment_unreachable_warns():
    rng = np.random.default_rng(45)
    directions = [sample_direction(12, rng=rng) for _ in range(2)]
    magnitudes = np.ones(2)
    with pytest.warns(DelegationWarning):
        clipped = adjust_collective_alignment(directions, magnitudes, 0.0, rng=rng)
    np.testing.assert_allclose(clipped, directions)


def test_random_game_hits_targets():
    spec = GeneratorSpec(
        players=2,
        strategy_counts=(5, 2),
        target_ia=(0.9, 0.9),
        target_principal_ca=0.9,
        seed=7,
    )
    game = random_delegation_game(spec)
    np.testing.assert_allclose(individual_alignment(game), [0.9, 0.9], atol=1e-6)
    assert collective_alignment(game.principal_payoffs) == pytest.approx(0.9, abs=1e-3)
    assert len(pure_eps_nash(game, np.zeros(2))) > 0
    magnitudes = [normalize(u).magnitude for u in game.agent_payoffs]
    assert all(0.5 <= m <= 1.5 for m in magnitudes)


def test_random_game_perfect_alignment_target():
    spec = GeneratorSpec(
        players=3,
        strategy_counts=(2, 2, 2),
        target_ia=(1.0, 1.0, 1.0),
        target_principal_ca=0.8,
        seed=3,
    )
    game = random_delegation_game(spec)
    np.testing.assert_allclose(individual_alignment(game), np.ones(3), atol=1e-9)


def test_random_game_determinism():
    spec = GeneratorSpec(
        players=2, strategy_counts=(3, 3), target_ia=(0.7, 0.8), target_principal_ca=0.85, seed=99
    )
    first = random_delegation_game(spec)
    second = random_delegation_game(spec)
    assert first.to_json() == second.to_json()
    other = random_delegation_game(
        GeneratorSpec(
            players=2, strategy_counts=(3, 3), target_ia=(0.7, 0.8),
            target_principal_ca=0.85, seed=100,
        )
    )
    assert first.to_json() != other.to_json()


def test_generator_spec_validation():
    with pytest.raises(InvalidArgumentError):
        GeneratorSpec(players=1, strategy_counts=(2,), target_ia=(0.5,), target_principal_ca=0.5)
    with pytest.raises(InvalidArgumentError):
        GeneratorSpec(players=2, strategy_counts=(2, 2), target_ia=(1.5, 0.5), target_principal_ca=0.5)
    with pytest.raises(InvalidArgumentError):
        GeneratorSpec(
            players=2, strategy_counts=(2, 2), target_ia=(0.5, 0.5),
            target_principal_ca=0.5, magnitude_range=(2.0, 1.0),
        )
