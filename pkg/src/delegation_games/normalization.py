"""Canonical representatives of preference classes and the norm machinery.

Utility functions that are positive affine transforms of one another encode
the same preferences.  Normalisation maps each utility vector to the unique
representative of its class: the shift component is removed and the result
is rescaled to unit norm.  Every alignment measure and every welfare bound
in this package is built on the same configured norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

NormKind = str  # "l2" | "weighted_l2" | "linf"
ShiftKind = str  # "mean" | "midrange"

_NORM_KINDS = ("l2", "weighted_l2", "linf")
_SHIFT_KINDS = ("mean", "midrange")

UNIT_NORM_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-9


def uniform_weights(outcome_count: int) -> np.ndarray:
    """Uniform full-support probability vector over outcomes."""
    if outcome_count < 1:
        raise InvalidArgumentError("outcome_count must be at least 1")
    return np.full(outcome_count, 1.0 / outcome_count)


@dataclass(frozen=True)
class NormalizationConfig:
    """Choice of shift function and norm used for normalisation and distances.

    ``weights`` is only consulted for the weighted l2 norm and must then be a
    full-support probability vector over outcomes.  The linf norm is not
    strictly convex; it is supported for illustration but flagged, since the
    perfect-misalignment characterisation only holds for strictly convex norms.
    """

    shift_kind: ShiftKind = "mean"
    norm_kind: NormKind = "l2"
    weights: np.ndarray | None = None

    def __post_init__(self):
        if self.shift_kind not in _SHIFT_KINDS:
            raise InvalidArgumentError(f"unknown shift kind {self.shift_kind!r}")
        if self.norm_kind not in _NORM_KINDS:
            raise InvalidArgumentError(f"unknown norm kind {self.norm_kind!r}")
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.ndim != 1 or w.size == 0:
                raise InvalidArgumentError("weights must be a nonempty vector")
            if (w <= 0).any():
                raise InvalidArgumentError("weights must have full support (all entries > 0)")
            if abs(w.sum() - 1.0) > 1e-12:
                raise InvalidArgumentError("weights must sum to 1 within 1e-12")
            object.__setattr__(self, "weights", w)

    @property
    def strictly_convex(self) -> bool:
        return self.norm_kind != "linf"

    def _weights_for(self, size: int) -> np.ndarray:
        if self.weights is None:
            raise InvalidArgumentError("weighted_l2 requires an explicit weight vector")
        if self.weights.size != size:
            raise InvalidArgumentError(
                f"weight vector has {self.weights.size} entries for {size} outcomes"
            )
        return self.weights


DEFAULT_CONFIG = NormalizationConfig()
WORKED_EXAMPLE_CONFIG = NormalizationConfig(shift_kind="midrange", norm_kind="linf")


@dataclass(frozen=True)
class NormalizedUtility:
    """A utility vector split into direction, magnitude and shift.

    ``magnitude * direction + shift`` reconstructs the original vector.
    Constant utilities take the zero branch: zero direction, zero magnitude.
    """

    direction: np.ndarray
    magnitude: float
    shift: float

    def reconstruct(self) -> np.ndarray:
        return self.magnitude * self.direction + self.shift


def shift(u: np.ndarray, cfg: NormalizationConfig = DEFAULT_CONFIG) -> float:
    """The affine-equivariant shift component of a utility vector."""
    u = np.asarray(u, dtype=float)
    if u.size == 0:
        raise InvalidArgumentError("utility vector must be nonempty")
    if cfg.shift_kind == "midrange":
        return float((u.max() + u.min()) / 2.0)
    if cfg.norm_kind == "weighted_l2" and cfg.weights is not None:
        return float(cfg._weights_for(u.size) @ u)
    return float(u.mean())


def norm_value(x: np.ndarray, cfg: NormalizationConfig = DEFAULT_CONFIG) -> float:
    """The configured norm of a vector."""
    x = np.asarray(x, dtype=float)
    if cfg.norm_kind == "l2":
        return float(np.linalg.norm(x))
    if cfg.norm_kind == "linf":
        return float(np.abs(x).max()) if x.size else 0.0
    w = cfg._weights_for(x.size)
    return float(np.sqrt(w @ (x * x)))


def norm_distance(
    a: np.ndarray, b: np.ndarray, cfg: NormalizationConfig = DEFAULT_CONFIG
) -> float:
    """Distance between two vectors under the configured norm."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"shape mismatch: {a.shape} vs {b.shape}")
    return norm_value(a - b, cfg)


def normalize(u: np.ndarray, cfg: NormalizationConfig = DEFAULT_CONFIG) -> NormalizedUtility:
    """Canonical representative of ``u``'s positive-affine equivalence class.

    Constant utilities take the zero branch.  The constancy test is relative:
    centering a constant vector leaves rounding residue of order
    ``eps * |u|``, which must not be normalised into a spurious direction.
    """
    u = np.asarray(u, dtype=float)
    c = shift(u, cfg)
    centered = u - c
    m = norm_value(centered, cfg)
    if m <= 1e-12 * norm_value(u, cfg):
        return NormalizedUtility(np.zeros_like(u), 0.0, c)
    return NormalizedUtility(centered / m, m, c)


def equivalence_constant(cfg: NormalizationConfig, outcome_count: int) -> float:
    """Smallest K with ``sup_norm(x) <= K * norm(x)`` for the configured norm.

    Tight cases: axis vectors for l2, the minimum-weight axis vector for
    weighted l2, and any vector at all for linf.
    """
    if outcome_count < 1:
        raise InvalidArgumentError("outcome_count must be at least 1")
    if cfg.norm_kind in ("l2", "linf"):
        return 1.0
    w = cfg._weights_for(outcome_count)
    return float(1.0 / np.sqrt(w.min()))
