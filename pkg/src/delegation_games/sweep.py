"""The measure-sweep experiment: vary one measure, pin the others, record welfare.

Each step of a sweep generates a batch of random delegation games.  Alignment
measures are targets handed to the generator; capability measures are applied
at analysis time, since how a game is played is independent of the game
itself.  Per game we record the mean principal welfare over the admissible
outcome set together with the landmark levels and the two bound curves, all
normalised to the principal's ``[w_minus, w_plus]`` span so games of
different scales share one axis.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import bounds
from .equilibria import admissible_outcomes
from .errors import GenerationFailureError, InvalidArgumentError
from .game import welfare_landmarks
from .generator import GeneratorSpec, random_delegation_game

VARIED_MEASURES = ("ia", "ic", "ca", "cc")
CSV_COLUMNS = (
    "varied_measure",
    "value",
    "game_index",
    "mean_principal_welfare_norm",
    "w_hat_star_norm",
    "w_hat_bullet_norm",
    "thm1_bound_norm",
    "prop4_bound_norm",
    "ci_lo",
    "ci_hi",
)


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: which measure varies, what the other three are pinned to."""

    varied_measure: str
    fixed_value: float = 0.9
    steps: int = 11
    games_per_step: int = 25
    generator_spec: GeneratorSpec = GeneratorSpec(
        players=2, strategy_counts=(3, 3), target_ia=(0.9, 0.9), target_principal_ca=0.9
    )
    seed: int = 0

    def __post_init__(self):
        if self.varied_measure not in VARIED_MEASURES:
            raise InvalidArgumentError(f"varied_measure must be one of {VARIED_MEASURES}")
        if not 0.0 <= self.fixed_value <= 1.0:
            raise InvalidArgumentError("fixed_value must lie in [0, 1]")
        if self.steps < 2:
            raise InvalidArgumentError("steps must be at least 2")
        if self.games_per_step < 1:
            raise InvalidArgumentError("games_per_step must be at least 1")


@dataclass(frozen=True)
class SweepRow:
    """One game at one step, with the step's confidence interval attached."""

    varied_measure: str
    value: float
    game_index: int
    mean_principal_welfare_norm: float
    w_hat_star_norm: float
    w_hat_bullet_norm: float
    thm1_bound_norm: float
    prop4_bound_norm: float
    ci_lo: float
    ci_hi: float


def _one_game(
    config: SweepConfig, value: float, step: int, game_index: int
) -> SweepRow | None:
    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(step, game_index)))
    fixed = config.fixed_value
    varied = config.varied_measure
    spec = replace(
        config.generator_spec,
        target_ia=(value if varied == "ia" else fixed,) * config.generator_spec.players,
        target_principal_ca=value if varied == "ca" else fixed,
    )
    ic = value if varied == "ic" else fixed
    cc = value if varied == "cc" else fixed
    cfg = spec.norm_cfg
    eps = np.full(spec.players, 1.0 - ic)
    for _ in range(25):
        try:
            game = random_delegation_game(spec, rng)
        except GenerationFailureError:
            return None
        admissible = admissible_outcomes(game, eps, cc)
        landmarks = welfare_landmarks(game.principal_payoffs)
        span = landmarks.w_plus - landmarks.w_minus
        # welfare bands can be empty and spans degenerate; both call for a fresh game
        if not admissible or span <= 1e-9:
            continue
        mean_welfare = float(np.mean([game.principal_welfare(p) for p in admissible]))
        thm1 = max(
            bounds.capabilities_regret_bound(game, eps, cc, cfg, True, p) for p in admissible
        )
        prop4 = bounds.ideal_gap_bound(game.principal_payoffs, cfg)
        return SweepRow(
            varied_measure=varied,
            value=value,
            game_index=game_index,
            mean_principal_welfare_norm=(mean_welfare - landmarks.w_minus) / span,
            w_hat_star_norm=(landmarks.w_star - landmarks.w_minus) / span,
            w_hat_bullet_norm=(landmarks.w_bullet - landmarks.w_minus) / span,
            thm1_bound_norm=thm1 / span,
            prop4_bound_norm=prop4 / span,
            ci_lo=math.nan,
            ci_hi=math.nan,
        )
    return None


def sweep(config: SweepConfig) -> list[SweepRow]:
    """Run the sweep; rows are ordered by (step, game_index) and deterministic.

    The 90% confidence interval at each step applies the normal approximation
    to the per-game normalised mean welfare; it is repeated on every row of
    the step.  Steps whose every game fails to generate are skipped.
    """
    rows: list[SweepRow] = []
    values = np.linspace(0.0, 1.0, config.steps)
    for step, value in enumerate(values):
        step_rows = []
        for game_index in range(config.games_per_step):
            row = _one_game(config, float(value), step, game_index)
            if row is not None:
                step_rows.append(row)
        if not step_rows:
            continue
        welfare = np.array([r.mean_principal_welfare_norm for r in step_rows])
        half = 1.645 * float(welfare.std(ddof=0)) / math.sqrt(len(welfare))
        mean = float(welfare.mean())
        rows.extend(
            replace(r, ci_lo=mean - half, ci_hi=mean + half) for r in step_rows
        )
    return rows


def _fmt(value: float | int | str) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    """Serialise sweep rows with a mandatory header and round-trippable floats."""
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(getattr(row, col)) for col in CSV_COLUMNS) + "\n")
    return buf.getvalue()


def rows_from_csv(text: str) -> list[SweepRow]:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or lines[0] != ",".join(CSV_COLUMNS):
        raise InvalidArgumentError("missing or unexpected sweep CSV header")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        rows.append(
            SweepRow(
                varied_measure=parts[0],
                value=float(parts[1]),
                game_index=int(parts[2]),
                mean_principal_welfare_norm=float(parts[3]),
                w_hat_star_norm=float(parts[4]),
                w_hat_bullet_norm=float(parts[5]),
                thm1_bound_norm=float(parts[6]),
                prop4_bound_norm=float(parts[7]),
                ci_lo=float(parts[8]),
                ci_hi=float(parts[9]),
            )
        )
    return rows
