"""Pure Nash and pure eps-Nash enumeration, and the equilibrium welfare levels.

All enumeration is exhaustive over pure profiles and unilateral deviations,
O(|S| * sum(k_i)); game sizes here stay at desk scale (<= 1e4 outcomes).
Games without a pure NE are reported with a distinct error so callers (the
random generator in particular) can resample.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError, NoEquilibriumError
from .game import DelegationGame, Profile

# Absolute tolerance on the normalized best-response gap inequality.
EPS_TOL = 1e-12
# Slack at both ends of the admissible welfare interval.
WELFARE_SLACK = 1e-12


def epsilon_tensor(game: DelegationGame) -> np.ndarray:
    """Per-player smallest eps making each pure profile an eps-best response.

    Shape ``(n, n_outcomes)`` in flat outcome order.  For player i at profile
    s the entry is ``(max - u_i(s)) / (max - min)`` over i's responses to
    ``s^{-i}``, and 0 when all responses tie.
    """
    counts = game.strategy_counts
    out = np.empty((game.n, game.n_outcomes))
    for i in range(game.n):
        u = game.agent_payoffs[i].reshape(counts)
        mx = u.max(axis=i, keepdims=True)
        mn = u.min(axis=i, keepdims=True)
        span = mx - mn
        with np.errstate(invalid="ignore", divide="ignore"):
            eps = np.where(span > 0, (mx - u) / span, 0.0)
        out[i] = eps.reshape(-1)
    return out


def pure_best_responses(
    game: DelegationGame, player: int, counter_profile: Sequence[int]
) -> set[int]:
    """Argmax set of the player's payoff against a fixed profile of the others.

    ``counter_profile`` lists the other players' strategies in player order
    (length n-1).  Ties are all included.
    """
    if not 0 <= player < game.n:
        raise IndexError(f"player {player} out of range for {game.n} players")
    counter = list(counter_profile)
    if len(counter) != game.n - 1:
        raise InvalidArgumentError(
            f"counter_profile must fix the other {game.n - 1} players"
        )
    payoffs = np.empty(game.strategy_counts[player])
    for s in range(game.strategy_counts[player]):
        full = counter[:player] + [s] + counter[player:]
        payoffs[s] = game.agent_payoffs[player, game.index(full)]
    best = payoffs.max()
    return {int(s) for s in np.flatnonzero(payoffs >= best)}


@dataclass(frozen=True)
class EquilibriumSet:
    """The pure eps-NE set for one eps vector, with its worst member welfare."""

    profiles: tuple[Profile, ...]
    eps: tuple[float, ...]
    min_welfare: float | None

    def __contains__(self, profile: Sequence[int]) -> bool:
        return tuple(profile) in self.profiles

    def __len__(self) -> int:
        return len(self.profiles)


def pure_eps_nash(game: DelegationGame, eps: Sequence[float]) -> EquilibriumSet:
    """All pure profiles where every player's lapse stays within its eps entry.

    ``eps = 0`` yields the pure NE set; an empty set is a valid result.
    """
    eps = np.asarray(eps, dtype=float)
    if eps.shape != (game.n,):
        raise InvalidArgumentError(f"eps must have one entry per player ({game.n})")
    if (eps < 0).any() or (eps > 1).any():
        raise InvalidArgumentError("eps entries must lie in [0, 1]")
    tensor = epsilon_tensor(game)
    member = (tensor <= eps[:, None] + EPS_TOL).all(axis=0)
    flat = np.flatnonzero(member)
    coords = np.unravel_index(flat, game.strategy_counts)
    profiles = tuple(
        tuple(int(coords[i][j]) for i in range(game.n)) for j in range(flat.size)
    )
    if profiles:
        welfares = game.agent_payoffs[:, flat].mean(axis=0)
        min_welfare = float(welfares.min())
    else:
        min_welfare = None
    return EquilibriumSet(profiles, tuple(float(e) for e in eps), min_welfare)


def equilibrium_welfares(
    game: DelegationGame, eps: Sequence[float]
) -> tuple[float, float]:
    """``(w_zero, w_eps)``: worst agent welfare over pure NEs and pure eps-NEs."""
    nash = pure_eps_nash(game, np.zeros(game.n))
    if nash.min_welfare is None:
        raise NoEquilibriumError("game has no pure Nash equilibrium")
    relaxed = pure_eps_nash(game, eps)
    # eps-NE set contains the NE set, so min_welfare is defined and <= w_zero.
    assert relaxed.min_welfare is not None
    return nash.min_welfare, relaxed.min_welfare


def admissible_outcomes(
    game: DelegationGame, eps: Sequence[float], cc: float
) -> list[Profile]:
    """Pure profiles whose agent welfare is consistent with capabilities (eps, cc).

    The welfare band is ``[w_eps + cc * (w_star - w_zero), w_eps + (w_star - w_zero)]``
    with a small slack at both ends; it may be empty.
    """
    if not 0.0 <= cc <= 1.0:
        raise InvalidArgumentError("cc must lie in [0, 1]")
    w_zero, w_eps = equilibrium_welfares(game, eps)
    w_star = float(game.agent_payoffs.mean(axis=0).max())
    span = w_star - w_zero
    lo = w_eps + cc * span - WELFARE_SLACK
    hi = w_eps + span + WELFARE_SLACK
    welfares = game.agent_payoffs.mean(axis=0)
    flat = np.flatnonzero((welfares >= lo) & (welfares <= hi))
    coords = np.unravel_index(flat, game.strategy_counts)
    return [tuple(int(coords[i][j]) for i in range(game.n)) for j in range(flat.size)]
