"""The four control/cooperation measures of a delegation game.

Alignment is a property of the game: individual alignment (IA) compares each
principal's normalised utility with their agent's, collective alignment (CA)
compares each player with a welfare-representative proxy utility.
Capabilities are a property of how the game is played: individual capability
(IC) grades observed responses against the attainable payoff range, and
collective capability (CC) grades achieved welfare against the span between
the worst equilibrium welfare and the maximum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import equilibria
from .errors import DegenerateGameError, InvalidArgumentError
from .game import DelegationGame, welfare_landmarks
from .normalization import (
    DEFAULT_CONFIG,
    NormalizationConfig,
    norm_distance,
    norm_value,
    normalize,
    shift,
)

MEASURE_TOL = 1e-12


def individual_alignment(
    game: DelegationGame, cfg: NormalizationConfig = DEFAULT_CONFIG
) -> np.ndarray:
    """Per-pair alignment ``1 - dist(principal, agent) / 2`` of normalised utilities."""
    out = np.empty(game.n)
    for i in range(game.n):
        agent = normalize(game.agent_payoffs[i], cfg)
        principal = normalize(game.principal_payoffs[i], cfg)
        out[i] = 1.0 - 0.5 * norm_distance(principal.direction, agent.direction, cfg)
    return out


def _centered_and_magnitudes(
    utilities: np.ndarray, cfg: NormalizationConfig
) -> tuple[np.ndarray, np.ndarray]:
    centered = np.empty_like(utilities, dtype=float)
    magnitudes = np.empty(utilities.shape[0])
    for i, u in enumerate(utilities):
        c = shift(u, cfg)
        centered[i] = u - c
        magnitudes[i] = norm_value(centered[i], cfg)
    return centered, magnitudes


def welfare_proxy(
    utilities: np.ndarray | Sequence[Sequence[float]],
    cfg: NormalizationConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """The welfare-representative utility: centered utilities summed, rescaled.

    Orders outcomes exactly as average welfare does, but lives on the same
    scale as the normalised utilities, which is what makes the collective
    alignment bounds tight.
    """
    utilities = np.asarray(utilities, dtype=float)
    centered, magnitudes = _centered_and_magnitudes(utilities, cfg)
    total = magnitudes.sum()
    if total == 0.0:
        raise DegenerateGameError("all utilities are constant; welfare proxy undefined")
    return centered.sum(axis=0) / total


def collective_alignment(
    utilities: np.ndarray | Sequence[Sequence[float]],
    cfg: NormalizationConfig = DEFAULT_CONFIG,
) -> float:
    """Magnitude-weighted alignment of each player with the welfare proxy."""
    utilities = np.asarray(utilities, dtype=float)
    centered, magnitudes = _centered_and_magnitudes(utilities, cfg)
    total = magnitudes.sum()
    if total == 0.0:
        raise DegenerateGameError("all utilities are constant; collective alignment undefined")
    mu = centered.sum(axis=0) / total
    acc = 0.0
    for i, m in enumerate(magnitudes):
        direction = centered[i] / m if m > 0 else np.zeros_like(mu)
        acc += (m / total) * norm_distance(mu, direction, cfg)
    return 1.0 - acc


def profile_epsilons(game: DelegationGame, profile: Sequence[int]) -> np.ndarray:
    """Smallest per-player eps making the profile an eps-best response."""
    idx = game.index(profile)
    return equilibria.epsilon_tensor(game)[:, idx].copy()


def individual_capability(
    game: DelegationGame, played: Iterable[Sequence[int]]
) -> np.ndarray:
    """``1 - eps`` per player for the worst lapse over the observed plays."""
    profiles = list(played)
    if not profiles:
        raise InvalidArgumentError("played must contain at least one profile")
    tensor = equilibria.epsilon_tensor(game)
    indices = [game.index(p) for p in profiles]
    return 1.0 - tensor[:, indices].max(axis=1)


def collective_capability(
    game: DelegationGame, achieved_welfare: float, eps: Sequence[float]
) -> float:
    """Fraction of the span from the worst eps-NE welfare toward the maximum achieved.

    Clamped to [0, 1]; when there is no room to cooperate (``w_star == w_zero``)
    achieving at least ``w_eps`` counts as full cooperation.
    """
    w_zero, w_eps = equilibria.equilibrium_welfares(game, eps)
    w_star = float(game.agent_payoffs.mean(axis=0).max())
    span = w_star - w_zero
    if span <= 0.0:
        return 1.0 if achieved_welfare >= w_eps - MEASURE_TOL else 0.0
    return float(np.clip((achieved_welfare - w_eps) / span, 0.0, 1.0))


def calibration_ratios(
    game: DelegationGame, cfg: NormalizationConfig = DEFAULT_CONFIG
) -> tuple[np.ndarray, float]:
    """Per-pair magnitude ratios ``principal/agent`` and their aggregate.

    A zero agent magnitude makes that pair's ratio infinite; the aggregate
    ``r_star = sum(principal magnitudes) / sum(agent magnitudes)`` needs at
    least one nonconstant agent utility.
    """
    _, m_agents = _centered_and_magnitudes(np.asarray(game.agent_payoffs, float), cfg)
    _, m_principals = _centered_and_magnitudes(np.asarray(game.principal_payoffs, float), cfg)
    if m_agents.sum() == 0.0:
        raise DegenerateGameError("all agent utilities are constant; ratios undefined")
    with np.errstate(divide="ignore"):
        ratios = np.where(m_agents > 0, m_principals / np.where(m_agents > 0, m_agents, 1.0), np.inf)
    r_star = float(m_principals.sum() / m_agents.sum())
    return ratios, r_star


@dataclass(frozen=True)
class MeasureReport:
    """All four measures plus calibration data for one game and one play record."""

    ia: np.ndarray
    ic: np.ndarray
    ca_agents: float
    ca_principals: float
    cc: float
    ratios: np.ndarray
    r_star: float
    welfare_proxy: np.ndarray
    warnings: tuple[str, ...] = ()


def full_report(
    game: DelegationGame,
    played: Iterable[Sequence[int]],
    cfg: NormalizationConfig = DEFAULT_CONFIG,
) -> MeasureReport:
    """Aggregate report: alignments from the game, capabilities from the plays.

    CC is derived from the mean agent welfare of the played profiles against
    ``eps = 1 - ic``, i.e. the capabilities actually exhibited.
    """
    profiles = [tuple(int(s) for s in p) for p in played]
    ia = individual_alignment(game, cfg)
    ca_agents = collective_alignment(game.agent_payoffs, cfg)
    ca_principals = collective_alignment(game.principal_payoffs, cfg)
    mu = welfare_proxy(game.agent_payoffs, cfg)
    ic = individual_capability(game, profiles)
    achieved = float(np.mean([game.agent_welfare(p) for p in profiles]))
    cc = collective_capability(game, achieved, 1.0 - ic)
    ratios, r_star = calibration_ratios(game, cfg)
    warnings: list[str] = []
    if not cfg.strictly_convex:
        warnings.append("non-strictly-convex norm: misalignment extremes are not exclusive")
    if np.isinf(ratios).any():
        warnings.append("constant agent utility: calibration ratio reported as infinity")
    return MeasureReport(
        ia=ia,
        ic=ic,
        ca_agents=ca_agents,
        ca_principals=ca_principals,
        cc=cc,
        ratios=ratios,
        r_star=r_star,
        welfare_proxy=mu,
        warnings=tuple(warnings),
    )


def report_landmarks(game: DelegationGame) -> dict:
    """Agent- and principal-side welfare landmarks as plain dicts."""
    out = {}
    for side, table in (("agents", game.agent_payoffs), ("principals", game.principal_payoffs)):
        lm = welfare_landmarks(table)
        out[side] = {
            "w_star": lm.w_star,
            "w_bullet": lm.w_bullet,
            "w_plus": lm.w_plus,
            "w_minus": lm.w_minus,
        }
    return out
