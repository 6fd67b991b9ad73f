"""Random delegation games with prescribed alignment values, plus fixed test games.

Random generation places unit direction vectors on the sphere of the
configured norm: principals are sampled first and pulled toward their common
mean until the target collective alignment is met, then each agent direction
is rotated away from its principal by the angle matching the target
individual alignment.  The spherical-rotation machinery needs an
inner-product norm (l2 or weighted l2) and the mean shift; the max-norm
worked example is provided as a fixed constructor instead.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import measures
from .equilibria import pure_eps_nash
from .errors import (
    DelegationWarning,
    GenerationFailureError,
    InvalidArgumentError,
    UnsupportedNormError,
)
from .game import DelegationGame
from .normalization import DEFAULT_CONFIG, NormalizationConfig, norm_value, shift

DEFAULT_RETRIES = 100
CA_TOL = 1e-6


def _require_rotatable(cfg: NormalizationConfig) -> None:
    if cfg.norm_kind == "linf":
        raise UnsupportedNormError("direction rotation needs an inner-product norm")
    if cfg.shift_kind != "mean":
        raise UnsupportedNormError("direction rotation needs the mean shift")


def _inner(x: np.ndarray, y: np.ndarray, cfg: NormalizationConfig) -> float:
    if cfg.norm_kind == "weighted_l2":
        return float((cfg._weights_for(x.size) * x) @ y)
    return float(x @ y)


def sample_direction(
    outcome_count: int,
    cfg: NormalizationConfig = DEFAULT_CONFIG,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """A unit-norm, zero-shift direction drawn from a centered Gaussian."""
    if outcome_count < 2:
        raise InvalidArgumentError("no nonconstant preferences exist over < 2 outcomes")
    rng = rng if rng is not None else np.random.default_rng()
    while True:
        raw = rng.standard_normal(outcome_count)
        centered = raw - shift(raw, cfg)
        m = norm_value(centered, cfg)
        if m > 1e-12:  # the zero vector is a measure-zero event
            return centered / m


def direction_at_distance(
    reference: np.ndarray,
    target_distance: float,
    cfg: NormalizationConfig = DEFAULT_CONFIG,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """A random direction at a prescribed norm distance from ``reference``.

    On the unit sphere a chord of length t corresponds to the angle with
    ``cos(theta) = 1 - t^2 / 2``; the result is the reference rotated by that
    angle toward a random orthogonal direction in the centered hyperplane.
    """
    _require_rotatable(cfg)
    if not 0.0 <= target_distance <= 2.0:
        raise InvalidArgumentError("target_distance must lie in [0, 2]")
    reference = np.asarray(reference, dtype=float)
    rng = rng if rng is not None else np.random.default_rng()
    if target_distance == 0.0:
        return reference.copy()
    if target_distance == 2.0:
        return -reference
    if reference.size < 3:
        # the centered hyperplane is 1-dimensional: only distances 0 and 2 exist
        raise InvalidArgumentError(
            "intermediate distances need at least 3 outcomes"
        )
    while True:
        candidate = sample_direction(reference.size, cfg, rng)
        residual = candidate - _inner(candidate, reference, cfg) * reference
        m = norm_value(residual, cfg)
        if m > 1e-9:
            orthogonal = residual / m
            break
    cos_theta = 1.0 - target_distance**2 / 2.0
    sin_theta = math.sqrt(max(0.0, 1.0 - cos_theta**2))
    return cos_theta * reference + sin_theta * orthogonal


def _ca_of(directions: list[np.ndarray], magnitudes: np.ndarray, cfg) -> float:
    utilities = np.array([m * d for m, d in zip(magnitudes, directions)])
    return measures.collective_alignment(utilities, cfg)


def adjust_collective_alignment(
    directions: list[np.ndarray],
    magnitudes: np.ndarray,
    target: float,
    cfg: NormalizationConfig = DEFAULT_CONFIG,
    rng: np.random.Generator | None = None,
    tol: float = CA_TOL,
) -> list[np.ndarray]:
    """Shrink all directions toward their common mean until CA hits ``target``.

    One shared interpolation parameter t is found by bisection: t = 0 puts
    every direction at the (normalised) mean, giving CA = 1, and t = 1 leaves
    them untouched.  Targets outside the reachable interval are clipped to the
    nearest endpoint with a warning.
    """
    _require_rotatable(cfg)
    magnitudes = np.asarray(magnitudes, dtype=float)
    rng = rng if rng is not None else np.random.default_rng()
    mean = np.mean(directions, axis=0)
    mean_norm = norm_value(mean, cfg)
    if mean_norm > 1e-12:
        attractor = mean / mean_norm
    else:
        # antipodal draws cancel; any common direction restores a usable path
        attractor = sample_direction(directions[0].size, cfg, rng)

    def at(t: float) -> list[np.ndarray]:
        out = []
        for d in directions:
            v = (1.0 - t) * attractor + t * d
            m = norm_value(v, cfg)
            out.append(v / m if m > 1e-15 else attractor.copy())
        return out

    ca_original = _ca_of(directions, magnitudes, cfg)
    if target >= 1.0:
        if target > 1.0 + tol:
            warnings.warn("collective-alignment target above 1 clipped", DelegationWarning)
        return at(0.0)
    if target <= ca_original:
        if target < ca_original - tol:
            warnings.warn(
                f"collective-alignment target {target:.6g} below the reachable "
                f"minimum {ca_original:.6g}; returning the unadjusted directions",
                DelegationWarning,
            )
        return [d.copy() for d in directions]
    lo, hi = 0.0, 1.0  # ca(lo) = 1 >= target >= ca(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        ca_mid = _ca_of(at(mid), magnitudes, cfg)
        if abs(ca_mid - target) <= tol:
            return at(mid)
        if ca_mid > target:
            lo = mid
        else:
            hi = mid
    return at(0.5 * (lo + hi))


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters for one random delegation game."""

    players: int
    strategy_counts: tuple[int, ...]
    target_ia: tuple[float, ...]
    target_principal_ca: float
    magnitude_range: tuple[float, float] = (0.5, 1.5)
    shift_range: tuple[float, float] = (-1.0, 1.0)
    seed: int = 0
    norm_cfg: NormalizationConfig = field(default=DEFAULT_CONFIG)

    def __post_init__(self):
        if self.players < 2:
            raise InvalidArgumentError("a delegation game needs at least 2 players")
        counts = tuple(int(k) for k in self.strategy_counts)
        if len(counts) != self.players or any(k < 1 for k in counts):
            raise InvalidArgumentError("strategy_counts must list one k >= 1 per player")
        object.__setattr__(self, "strategy_counts", counts)
        ia = self.target_ia
        if np.isscalar(ia):
            ia = (float(ia),) * self.players
        ia = tuple(float(v) for v in np.atleast_1d(np.asarray(ia, dtype=float)))
        if len(ia) != self.players:
            raise InvalidArgumentError("target_ia must have one entry per player")
        if any(not 0.0 <= v <= 1.0 for v in ia) or not 0.0 <= self.target_principal_ca <= 1.0:
            raise InvalidArgumentError("alignment targets must lie in [0, 1]")
        object.__setattr__(self, "target_ia", ia)
        for lo, hi in (self.magnitude_range, self.shift_range):
            if not lo < hi:
                raise InvalidArgumentError("ranges must satisfy lo < hi")


def random_delegation_game(
    spec: GeneratorSpec,
    rng: np.random.Generator | None = None,
    retries: int = DEFAULT_RETRIES,
) -> DelegationGame:
    """A random game meeting the requested alignment targets and owning a pure NE.

    Games without a pure NE are resampled wholesale (repairing payoffs would
    bias their distribution); equal seeds give bit-identical games.
    """
    rng = rng if rng is not None else np.random.default_rng(spec.seed)
    cfg = spec.norm_cfg
    n = spec.players
    size = int(math.prod(spec.strategy_counts))
    for _ in range(retries):
        m_hat = rng.uniform(*spec.magnitude_range, n)
        c_hat = rng.uniform(*spec.shift_range, n)
        # shrinking toward the mean can only raise CA, so redraw direction sets
        # that start out more aligned than the target
        for _ in range(retries):
            principal_dirs = [sample_direction(size, cfg, rng) for _ in range(n)]
            if _ca_of(principal_dirs, m_hat, cfg) <= spec.target_principal_ca + CA_TOL:
                break
        principal_dirs = adjust_collective_alignment(
            principal_dirs, m_hat, spec.target_principal_ca, cfg, rng
        )
        agent_dirs = [
            direction_at_distance(principal_dirs[i], 2.0 * (1.0 - spec.target_ia[i]), cfg, rng)
            for i in range(n)
        ]
        m = rng.uniform(*spec.magnitude_range, n)
        c = rng.uniform(*spec.shift_range, n)
        game = DelegationGame(
            spec.strategy_counts,
            np.array([m[i] * agent_dirs[i] + c[i] for i in range(n)]),
            np.array([m_hat[i] * principal_dirs[i] + c_hat[i] for i in range(n)]),
        )
        if len(pure_eps_nash(game, np.zeros(n))) > 0:
            return game
    raise GenerationFailureError(
        f"no game with a pure Nash equilibrium found in {retries} attempts"
    )


def make_worked_example() -> DelegationGame:
    """The 2x2 route-choice game used throughout the documentation and tests."""
    return DelegationGame(
        (2, 2),
        np.array([[3.0, 6.0, 2.0, 0.0], [3.0, 2.0, 6.0, 0.0]]),
        np.array([[2.0, 3.0, 4.0, 3.0], [3.0, 3.0, 6.0, 0.0]]),
    )


def make_prisoners_dilemma(x: float) -> DelegationGame:
    """Prisoner's Dilemma scaled so ideal welfare is 1; principals share the payoffs.

    Its unique NE leaves a welfare regret ratio of ``1 - x`` however well
    controlled the agents are.
    """
    if not 0.0 < x < 1.0:
        raise InvalidArgumentError("x must lie in (0, 1)")
    u1 = np.array([1.0 - x / 2.0, 0.0, 1.0, x / 2.0])
    u2 = np.array([1.0 - x / 2.0, 1.0, 0.0, x / 2.0])
    agents = np.array([u1, u2])
    return DelegationGame((2, 2), agents, agents.copy())


def make_fragile_game(e1: float, e2: float, x: float) -> DelegationGame:
    """3x3 game whose eps-NE welfare collapses to ~x while its NE welfare is ideal."""
    if not (0.0 < e1 < 1.0 and 0.0 < e2 < 1.0):
        raise InvalidArgumentError("e1 and e2 must lie in (0, 1)")
    if not 0.0 < x < 1.0:
        raise InvalidArgumentError("x must lie in (0, 1)")
    u1 = np.array([1.0, x, 0.0, 1.0 - e1, (1.0 - e1) * x, x, 0.0, 0.0, 0.0])
    u2 = np.array([1.0, 1.0 - e2, 0.0, x, (1.0 - e2) * x, 0.0, 0.0, x, 0.0])
    agents = np.array([u1, u2])
    return DelegationGame((3, 3), agents, agents.copy())


def make_travellers_dilemma(k: int) -> DelegationGame:
    """Symmetric k-action Traveller's Dilemma with ``x = 1/(k+1)``.

    Diagonal payoffs descend from ``1 - x`` to ``x``; adjacent claims trade an
    undercut bonus (the lower-indexed action loses ``3x`` relative to its
    diagonal, the higher-indexed one gains); all other pairs pay zero.  The
    unique pure NE is the mutual last action.
    """
    if k < 2:
        raise InvalidArgumentError("k must be at least 2")
    x = 1.0 / (k + 1)
    u1 = np.zeros((k, k))
    u2 = np.zeros((k, k))
    for j in range(k):
        u1[j, j] = u2[j, j] = 1.0 - (j + 1) * x
        if j + 1 < k:
            u1[j, j + 1] = 1.0 - (j + 3) * x  # row undercut by the column claim
            u2[j, j + 1] = 1.0 - j * x
            u1[j + 1, j] = 1.0 - j * x
            u2[j + 1, j] = 1.0 - (j + 3) * x
    agents = np.array([u1.reshape(-1), u2.reshape(-1)])
    return DelegationGame((k, k), agents, agents.copy())
