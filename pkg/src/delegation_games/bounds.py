"""Upper bounds on the principals' welfare regret.

Each bound is evaluated in raw (average) welfare units.  The reference
outcome ``s_hat_star`` is the lexicographically first principal-welfare
maximiser, a deterministic tie-break so reported bound values are
reproducible.  K is the equivalence constant of the configured norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import equilibria, measures
from .errors import DegenerateGameError, InvalidArgumentError
from .game import DelegationGame, Profile
from .normalization import (
    DEFAULT_CONFIG,
    NormalizationConfig,
    equivalence_constant,
    norm_distance,
    normalize,
)


def principal_optimum(game: DelegationGame) -> Profile:
    """Lexicographically first pure profile maximising principal welfare."""
    welfares = game.principal_payoffs.mean(axis=0)
    flat = int(np.argmax(welfares))  # argmax takes the first maximiser
    return tuple(int(i) for i in np.unravel_index(flat, game.strategy_counts))


def _pair_normalization(game: DelegationGame, cfg: NormalizationConfig):
    agents = [normalize(u, cfg) for u in game.agent_payoffs]
    principals = [normalize(u, cfg) for u in game.principal_payoffs]
    m = np.array([a.magnitude for a in agents])
    m_hat = np.array([p.magnitude for p in principals])
    return agents, principals, m, m_hat


def _misalignment_term(game: DelegationGame, cfg: NormalizationConfig) -> float:
    """The shared term ``(4K/n) * sum_i m_hat_i (1 - IA_i)``."""
    k = equivalence_constant(cfg, game.n_outcomes)
    ia = measures.individual_alignment(game, cfg)
    _, _, _, m_hat = _pair_normalization(game, cfg)
    return float(4.0 * k / game.n * (m_hat @ (1.0 - ia)))


def alignment_regret_bound(
    game: DelegationGame,
    profile: Sequence[int],
    cfg: NormalizationConfig = DEFAULT_CONFIG,
) -> float:
    """Regret bound from individual alignment alone.

    ``(1/n) sum_i r_i (u_i(s_hat_star) - u_i(s)) + (4K/n) sum_i m_hat_i (1 - IA_i)``.
    """
    _, _, m, m_hat = _pair_normalization(game, cfg)
    if (m == 0).any():
        raise DegenerateGameError("constant agent utility: calibration ratio infinite")
    ratios = m_hat / m
    opt = game.index(principal_optimum(game))
    idx = game.index(profile)
    diffs = game.agent_payoffs[:, opt] - game.agent_payoffs[:, idx]
    return float(ratios @ diffs / game.n + _misalignment_term(game, cfg))


def exact_remainder(
    game: DelegationGame,
    profile: Sequence[int],
    cfg: NormalizationConfig = DEFAULT_CONFIG,
) -> float:
    """Fairness remainder ``(1/n) sum_i (r_i - r*) m_i (u_nu_i(s_hat_star) - u_nu_i(s))``.

    ``r*`` is fixed to ``sum(m_hat) / sum(m)``, the choice that cancels the
    remainder both when all ratios are equal and under perfect collective
    alignment.
    """
    agents, _, m, m_hat = _pair_normalization(game, cfg)
    if (m == 0).any():
        raise DegenerateGameError("constant agent utility: calibration ratio infinite")
    r = m_hat / m
    r_star = m_hat.sum() / m.sum()
    opt = game.index(principal_optimum(game))
    idx = game.index(profile)
    total = 0.0
    for i in range(game.n):
        total += (r[i] - r_star) * m[i] * (agents[i].direction[opt] - agents[i].direction[idx])
    return total / game.n


def remainder_bound(game: DelegationGame, cfg: NormalizationConfig = DEFAULT_CONFIG) -> float:
    """Profile-independent bound ``(2K/n) sum_i |m_hat_i - r* m_i| dist(u_nu_i, mu)``."""
    agents, _, m, m_hat = _pair_normalization(game, cfg)
    if m.sum() == 0.0:
        raise DegenerateGameError("all agent utilities are constant")
    r_star = m_hat.sum() / m.sum()
    mu = measures.welfare_proxy(game.agent_payoffs, cfg)
    k = equivalence_constant(cfg, game.n_outcomes)
    total = 0.0
    for i in range(game.n):
        d_w = norm_distance(agents[i].direction, mu, cfg)
        total += abs(m_hat[i] - r_star * m[i]) * d_w
    return float(2.0 * k / game.n * total)


def capabilities_regret_bound(
    game: DelegationGame,
    eps: Sequence[float],
    cc: float,
    cfg: NormalizationConfig = DEFAULT_CONFIG,
    use_exact_remainder: bool = False,
    profile: Sequence[int] | None = None,
) -> float:
    """Regret bound combining misalignment, capabilities and miscalibration.

    ``(4K/n) sum m_hat_i (1 - IA_i) + r* ((w_0 - w_eps) + (1 - cc)(w_star - w_0)) + R``
    where R is the exact remainder at ``profile`` or its profile-independent bound.
    """
    if not 0.0 <= cc <= 1.0:
        raise InvalidArgumentError("cc must lie in [0, 1]")
    _, _, m, m_hat = _pair_normalization(game, cfg)
    if m.sum() == 0.0:
        raise DegenerateGameError("all agent utilities are constant")
    r_star = m_hat.sum() / m.sum()
    w_zero, w_eps = equilibria.equilibrium_welfares(game, eps)
    w_star = float(game.agent_payoffs.mean(axis=0).max())
    capability_term = r_star * ((w_zero - w_eps) + (1.0 - cc) * (w_star - w_zero))
    if use_exact_remainder:
        if profile is None:
            raise InvalidArgumentError("the exact remainder needs a profile")
        r = exact_remainder(game, profile, cfg)
    else:
        r = remainder_bound(game, cfg)
    return _misalignment_term(game, cfg) + capability_term + r


def ideal_gap_bound(
    utilities: np.ndarray | Sequence[Sequence[float]],
    cfg: NormalizationConfig = DEFAULT_CONFIG,
) -> float:
    """Bound on the ideal-vs-maximal welfare gap: ``(K sum m_i / n)(1 - CA)``."""
    utilities = np.asarray(utilities, dtype=float)
    ca = measures.collective_alignment(utilities, cfg)
    magnitudes = [normalize(u, cfg).magnitude for u in utilities]
    k = equivalence_constant(cfg, utilities.shape[1])
    return float(k * sum(magnitudes) / utilities.shape[0] * (1.0 - ca))


def robustness_gap_bound(game: DelegationGame, delta: float) -> float:
    """Bound on ``w_0 - w_eps`` when all eps-NEs lie within radius delta of an NE.

    ``(2 delta / n) sum_i (max_s u_i - min_s u_i)``; delta is caller-supplied,
    the premise itself is not verified here.
    """
    if delta < 0:
        raise InvalidArgumentError("delta must be nonnegative")
    ranges = game.agent_payoffs.max(axis=1) - game.agent_payoffs.min(axis=1)
    return float(2.0 * delta / game.n * ranges.sum())


@dataclass(frozen=True)
class BoundReport:
    """Bound values for one game and one set of played profiles.

    Profile-dependent entries (alignment bound, capabilities bound, exact
    remainder) take the maximum over the played profiles; entries are None
    when no play record was supplied.
    """

    alignment_bound: float | None
    capabilities_bound: float | None
    ideal_gap_bound: float
    remainder_exact: float | None
    remainder_bound: float
    robustness_gap: float | None = None


def bound_report(
    game: DelegationGame,
    played: Iterable[Sequence[int]] | None,
    cfg: NormalizationConfig = DEFAULT_CONFIG,
    delta: float | None = None,
) -> BoundReport:
    """Assemble all bounds; the ideal-gap bound is reported for the principal side."""
    profiles = [tuple(int(s) for s in p) for p in played] if played is not None else []
    gap = ideal_gap_bound(game.principal_payoffs, cfg)
    rem_bound = remainder_bound(game, cfg)
    if profiles:
        align = max(alignment_regret_bound(game, p, cfg) for p in profiles)
        rem_exact = max(exact_remainder(game, p, cfg) for p in profiles)
        ic = measures.individual_capability(game, profiles)
        achieved = float(np.mean([game.agent_welfare(p) for p in profiles]))
        cc = measures.collective_capability(game, achieved, 1.0 - ic)
        cap = max(
            capabilities_regret_bound(game, 1.0 - ic, cc, cfg, True, p) for p in profiles
        )
    else:
        align = rem_exact = cap = None
    rob = robustness_gap_bound(game, delta) if delta is not None else None
    return BoundReport(
        alignment_bound=align,
        capabilities_bound=cap,
        ideal_gap_bound=gap,
        remainder_exact=rem_exact,
        remainder_bound=rem_bound,
        robustness_gap=rob,
    )
