import numpy as np
import pytest

from delegation_games import (
    DelegationGame,
    InvalidArgumentError,
    payoff,
    validate_game,
    welfare,
    welfare_landmarks,
)

from conftest import brute_landmarks, random_payoff_game


def test_payoff_lookup(worked):
    assert payoff(worked, "agent", 0, (0, 1)) == 6
    assert payoff(worked, "principal", 1, (1, 0)) == 6
    zero = DelegationGame((2, 2), np.zeros((2, 4)), np.zeros((2, 4)))
    assert payoff(zero, "agent", 1, (0, 0)) == 0


def test_payoff_index_errors(worked):
    with pytest.raises(IndexError):
        payoff(worked, "agent", 2, (0, 0))
    with pytest.raises(IndexError):
        payoff(worked, "agent", 0, (0, 2))
    with pytest.raises(IndexError):
        payoff(worked, "agent", 0, (0,))


def test_welfare_examples(worked):
    assert welfare(worked.agent_payoffs, (0, 1), worked.strategy_counts) == 4
    assert welfare(worked.principal_payoffs, (1, 0), worked.strategy_counts) == 5
    constant = np.full((3, 4), 2.5)
    assert welfare(constant, (1, 1), (2, 2)) == 2.5
    with pytest.raises(InvalidArgumentError):
        welfare(np.empty((0, 4)), (0, 0), (2, 2))


def test_landmarks_worked_example(worked):
    agents = welfare_landmarks(worked.agent_payoffs)
    assert (agents.w_star, agents.w_plus, agents.w_bullet, agents.w_minus) == (4, 6, 0, 0)
    principals = welfare_landmarks(worked.principal_payoffs)
    assert (principals.w_star, principals.w_plus) == (5, 5)
    assert (principals.w_bullet, principals.w_minus) == (1.5, 1)


def test_landmarks_single_outcome():
    lm = welfare_landmarks(np.array([[3.0], [7.0]]))
    assert lm.w_star == lm.w_bullet == lm.w_plus == lm.w_minus == 5.0


def test_validate_game(worked):
    assert validate_game(worked) == []
    bad = DelegationGame((2, 2), np.array([[np.nan] * 4, [0.0] * 4]), np.zeros((2, 4)))
    assert any("non-finite" in v for v in validate_game(bad))
    mismatched = DelegationGame((2, 2), np.zeros((3, 4)), np.zeros((2, 4)))
    assert any("count mismatch" in v for v in validate_game(mismatched))
    short = DelegationGame((2, 2), np.zeros((2, 3)), np.zeros((2, 4)))
    assert any("length mismatch" in v for v in validate_game(short))


def test_json_round_trip(worked):
    clone = DelegationGame.from_json(worked.to_json())
    assert clone.strategy_counts == worked.strategy_counts
    assert np.array_equal(clone.agent_payoffs, worked.agent_payoffs)
    assert np.array_equal(clone.principal_payoffs, worked.principal_payoffs)


def test_landmark_ordering_matches_brute_force():
    rng = np.random.default_rng(101)
    for _ in range(1000):
        game = random_payoff_game(rng)
        lm = welfare_landmarks(game.agent_payoffs)
        assert lm.w_minus <= lm.w_bullet + 1e-12
        assert lm.w_bullet <= lm.w_star + 1e-12
        assert lm.w_star <= lm.w_plus + 1e-12
        star, bullet, plus, minus = brute_landmarks(game.agent_payoffs)
        assert lm.w_star == pytest.approx(star, abs=1e-12)
        assert lm.w_bullet == pytest.approx(bullet, abs=1e-12)
        assert lm.w_plus == pytest.approx(plus, abs=1e-12)
        assert lm.w_minus == pytest.approx(minus, abs=1e-12)


def test_welfare_permutation_symmetry():
    rng = np.random.default_rng(7)
    for _ in range(100):
        game = random_payoff_game(rng)
        perm = tuple(int(p) for p in rng.permutation(game.n))
        counts = tuple(game.strategy_counts[p] for p in perm)
        # permute both the player rows and the outcome axes to match
        tensor = game.agent_payoffs.reshape((game.n,) + game.strategy_counts)
        swapped = tensor[list(perm)].transpose((0,) + tuple(1 + p for p in perm))
        profile = tuple(int(rng.integers(k)) for k in game.strategy_counts)
        swapped_profile = tuple(profile[p] for p in perm)
        assert welfare(game.agent_payoffs, profile, game.strategy_counts) == pytest.approx(
            welfare(swapped.reshape(game.n, -1), swapped_profile, counts), abs=1e-12
        )


def test_pure_welfare_dominates_sampled_mixtures():
    rng = np.random.default_rng(11)
    for _ in range(50):
        game = random_payoff_game(rng)
        lm = welfare_landmarks(game.agent_payoffs)
        coords = np.indices(game.strategy_counts).reshape(game.n, -1)
        joint = np.ones((200, game.n_outcomes))
        for i, k in enumerate(game.strategy_counts):
            probs = rng.uniform(size=(200, k))
            probs /= probs.sum(axis=1, keepdims=True)
            joint *= probs[:, coords[i]]
        expected = joint @ game.agent_payoffs.mean(axis=0)
        assert expected.max() <= lm.w_star + 1e-9
