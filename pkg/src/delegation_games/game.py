"""Strategic-form delegation games: payoff storage, welfare, and welfare landmarks.

A delegation game pairs the game actually played by n agents with a second
payoff assignment for the n principals they act for, over the same pure
outcome space.  Payoffs are stored as flat vectors of length ``prod(k_i)``
in lexicographic outcome order with player 1 varying slowest, which makes
the JSON interchange format and all index arithmetic exact across tools.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import InvalidArgumentError

Profile = tuple[int, ...]
Side = Literal["agent", "principal"]


def outcome_index(strategy_counts: Sequence[int], profile: Sequence[int]) -> int:
    """Flat index of a pure profile (player 1 slowest-varying)."""
    if len(profile) != len(strategy_counts):
        raise IndexError(
            f"profile has {len(profile)} entries for {len(strategy_counts)} players"
        )
    idx = 0
    for s, k in zip(profile, strategy_counts):
        if not 0 <= s < k:
            raise IndexError(f"strategy index {s} out of range for {k} strategies")
        idx = idx * k + s
    return idx


def all_profiles(strategy_counts: Sequence[int]) -> list[Profile]:
    """Every pure profile in flat (lexicographic) order."""
    grid = np.indices(tuple(strategy_counts)).reshape(len(strategy_counts), -1)
    return [tuple(int(x) for x in col) for col in grid.T]


@dataclass(frozen=True)
class WelfareLandmarks:
    """The four reference welfare levels of a single (agent or principal) game.

    ``w_star`` is the best average welfare any pure outcome achieves and
    ``w_bullet`` the worst; ``w_plus`` / ``w_minus`` average each player's
    individually best / worst payoff, which no single outcome need realise.
    They always satisfy ``w_minus <= w_bullet <= w_star <= w_plus``.
    """

    w_star: float
    w_bullet: float
    w_plus: float
    w_minus: float


@dataclass(frozen=True)
class DelegationGame:
    """Payoff tensors for n agents and n principals over a product outcome space.

    ``agent_payoffs`` and ``principal_payoffs`` are arrays of shape
    ``(n, prod(strategy_counts))`` in flat outcome order.
    """

    strategy_counts: tuple[int, ...]
    agent_payoffs: np.ndarray
    principal_payoffs: np.ndarray

    @property
    def n(self) -> int:
        return len(self.strategy_counts)

    @property
    def n_outcomes(self) -> int:
        return int(math.prod(self.strategy_counts))

    def index(self, profile: Sequence[int]) -> int:
        return outcome_index(self.strategy_counts, profile)

    def profiles(self) -> list[Profile]:
        return all_profiles(self.strategy_counts)

    def agent_welfare(self, profile: Sequence[int]) -> float:
        return float(self.agent_payoffs[:, self.index(profile)].mean())

    def principal_welfare(self, profile: Sequence[int]) -> float:
        return float(self.principal_payoffs[:, self.index(profile)].mean())

    def to_dict(self) -> dict:
        return {
            "players": self.n,
            "strategies": list(self.strategy_counts),
            "agent_payoffs": self.agent_payoffs.tolist(),
            "principal_payoffs": self.principal_payoffs.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_payoffs(
        cls,
        strategy_counts: Sequence[int],
        agent_payoffs: Iterable[Iterable[float]],
        principal_payoffs: Iterable[Iterable[float]],
    ) -> "DelegationGame":
        counts = tuple(int(k) for k in strategy_counts)
        agents = np.asarray(agent_payoffs, dtype=float)
        principals = np.asarray(principal_payoffs, dtype=float)
        return cls(counts, agents, principals)

    @classmethod
    def from_dict(cls, data: dict) -> "DelegationGame":
        game = cls.from_payoffs(
            data["strategies"], data["agent_payoffs"], data["principal_payoffs"]
        )
        if int(data.get("players", game.n)) != game.n:
            raise InvalidArgumentError(
                "'players' field disagrees with the number of strategy counts"
            )
        return game

    @classmethod
    def from_json(cls, text: str) -> "DelegationGame":
        return cls.from_dict(json.loads(text))


def payoff(game: DelegationGame, side: Side, player: int, profile: Sequence[int]) -> float:
    """Stored payoff of one player at one pure profile."""
    table = game.agent_payoffs if side == "agent" else game.principal_payoffs
    if not 0 <= player < game.n:
        raise IndexError(f"player {player} out of range for {game.n} players")
    return float(table[player, game.index(profile)])


def welfare(
    utilities: np.ndarray | Sequence[Sequence[float]],
    profile: Sequence[int],
    strategy_counts: Sequence[int],
) -> float:
    """Average utilitarian welfare of a pure profile: the mean payoff over players."""
    table = np.asarray(utilities, dtype=float)
    if table.ndim != 2 or table.shape[0] == 0:
        raise InvalidArgumentError("utilities must be a nonempty list of vectors")
    return float(table[:, outcome_index(strategy_counts, profile)].mean())


def welfare_landmarks(utilities: np.ndarray | Sequence[Sequence[float]]) -> WelfareLandmarks:
    """Landmarks by exhaustive scan over pure outcomes.

    A welfare-maximal mixed profile can always be replaced by a pure one,
    so the pure scan is exact for ``w_star`` and ``w_bullet``.
    """
    table = np.asarray(utilities, dtype=float)
    if table.ndim != 2 or table.shape[0] == 0:
        raise InvalidArgumentError("utilities must be a nonempty list of vectors")
    per_outcome = table.mean(axis=0)
    return WelfareLandmarks(
        w_star=float(per_outcome.max()),
        w_bullet=float(per_outcome.min()),
        w_plus=float(table.max(axis=1).mean()),
        w_minus=float(table.min(axis=1).mean()),
    )


def validate_game(game: DelegationGame) -> list[str]:
    """Every invariant violation of the game, or an empty list if it is well formed."""
    violations: list[str] = []
    n = game.n
    if n < 1:
        violations.append("game needs at least one player")
    if any(k < 1 for k in game.strategy_counts):
        violations.append("every player needs at least one strategy")
    size = game.n_outcomes
    for name, table in (("agent", game.agent_payoffs), ("principal", game.principal_payoffs)):
        table = np.asarray(table)
        if table.ndim != 2 or table.shape[0] != n:
            violations.append(f"{name} tensor count mismatch: expected {n} utility vectors")
            continue
        if table.shape[1] != size:
            violations.append(
                f"{name} tensor length mismatch: expected {size} outcomes, got {table.shape[1]}"
            )
        if not np.isfinite(table).all():
            violations.append(f"non-finite entry in {name} payoffs")
    return violations
