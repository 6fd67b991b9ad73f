"""Shared fixtures and independent brute-force oracles.

The oracles here recompute quantities with plain Python loops and their own
index arithmetic so the vectorised implementations are checked against a
genuinely separate path.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from delegation_games import DelegationGame, make_worked_example
from delegation_games.normalization import (
    NormalizationConfig,
)


@pytest.fixture
def worked() -> DelegationGame:
    return make_worked_example()


@pytest.fixture
def linf_cfg() -> NormalizationConfig:
    return NormalizationConfig(shift_kind="midrange", norm_kind="linf")


def brute_profiles(counts):
    """All profiles by nested loops, player 1 slowest."""
    profiles = [()]
    for k in counts:
        profiles = [p + (s,) for p in profiles for s in range(k)]
    return profiles


def brute_index(counts, profile):
    idx = 0
    for s, k in zip(profile, counts):
        idx = idx * k + s
    return idx


def brute_landmarks(utilities):
    """(w_star, w_bullet, w_plus, w_minus) by scanning python lists."""
    utilities = [list(u) for u in utilities]
    n = len(utilities)
    size = len(utilities[0])
    welfares = [sum(u[j] for u in utilities) / n for j in range(size)]
    w_plus = sum(max(u) for u in utilities) / n
    w_minus = sum(min(u) for u in utilities) / n
    return max(welfares), min(welfares), w_plus, w_minus


def brute_profile_epsilons(game: DelegationGame, profile):
    """Per-player eps recomputed from raw payoffs, no shared code."""
    counts = game.strategy_counts
    out = []
    for i in range(game.n):
        values = []
        for s in range(counts[i]):
            probe = list(profile)
            probe[i] = s
            values.append(game.agent_payoffs[i][brute_index(counts, probe)])
        top, bottom = max(values), min(values)
        mine = game.agent_payoffs[i][brute_index(counts, profile)]
        out.append(0.0 if top == bottom else (top - mine) / (top - bottom))
    return out


def brute_eps_nash(game: DelegationGame, eps):
    """Membership by the raw eps-best-response inequality, profile by profile."""
    members = []
    for profile in brute_profiles(game.strategy_counts):
        lapses = brute_profile_epsilons(game, profile)
        if all(lapse <= e + 1e-12 for lapse, e in zip(lapses, eps)):
            members.append(profile)
    return members


def random_payoff_game(rng: np.random.Generator, max_players=3, max_strategies=3):
    """A game with arbitrary payoffs (no NE guarantee); for pure-math properties."""
    n = int(rng.integers(2, max_players + 1))
    counts = tuple(int(rng.integers(2, max_strategies + 1)) for _ in range(n))
    size = math.prod(counts)
    return DelegationGame(
        counts,
        rng.normal(size=(n, size)) * rng.uniform(0.5, 3.0),
        rng.normal(size=(n, size)) * rng.uniform(0.5, 3.0),
    )


def random_generated_game(rng: np.random.Generator, max_outcomes=100):
    """A random game from the constrained generator (guaranteed pure NE)."""
    import warnings

    from delegation_games import DelegationWarning, GeneratorSpec, random_delegation_game

    n = int(rng.integers(2, 5))
    limits = {2: 10, 3: 4, 4: 3}
    counts = tuple(int(rng.integers(2, limits[n] + 1)) for _ in range(n))
    while math.prod(counts) > max_outcomes:
        counts = tuple(int(rng.integers(2, limits[n] + 1)) for _ in range(n))
    spec = GeneratorSpec(
        players=n,
        strategy_counts=counts,
        target_ia=tuple(rng.uniform(0.0, 1.0, n)),
        target_principal_ca=float(rng.uniform(0.5, 1.0)),
        seed=0,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DelegationWarning)
        return random_delegation_game(spec, rng)


def spearman(x, y) -> float:
    """Rank correlation with average ranks on ties."""

    def ranks(values):
        values = np.asarray(values, dtype=float)
        order = np.argsort(values, kind="stable")
        out = np.empty(len(values))
        i = 0
        ordered = values[order]
        while i < len(values):
            j = i
            while j + 1 < len(values) and ordered[j + 1] == ordered[i]:
                j += 1
            out[order[i : j + 1]] = (i + j) / 2.0
            i = j + 1
        return out

    return float(np.corrcoef(ranks(x), ranks(y))[0, 1])
