"""Estimating the four measures from observations of play.

Alignment estimates restrict the utility vectors to the outcomes actually
observed and re-run the exact measures on the restriction.  Capability
estimates are one-sided: under nonnegative payoffs, ratios of observed
payoffs to the best observed alternative upper-bound the true capability
values, and only tighten as observations accumulate.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from . import measures
from .equilibria import EPS_TOL, admissible_outcomes
from .errors import (
    DelegationWarning,
    InsufficientDataError,
    InvalidArgumentError,
    PreconditionViolationError,
    SimulationError,
)
from .game import DelegationGame, Profile, outcome_index
from .generator import GeneratorSpec, random_delegation_game
from .normalization import (
    DEFAULT_CONFIG,
    NormalizationConfig,
    norm_distance,
    normalize,
    uniform_weights,
)

PAYOFF_CONSISTENCY_TOL = 1e-9


@dataclass(frozen=True)
class Observation:
    """One observed play: the profile, both payoff vectors, and the play mode.

    ``solo_player`` identifies whose lone decision produced a ``solo``
    observation; joint observations leave it unset.
    """

    profile: Profile
    agent_payoffs: tuple[float, ...]
    principal_payoffs: tuple[float, ...]
    mode: str  # "joint" | "solo"
    solo_player: int | None = None


@dataclass(frozen=True)
class ObservationDataset:
    """An ordered record of observations over a fixed strategy space."""

    observations: tuple[Observation, ...]
    strategy_counts: tuple[int, ...]

    @property
    def player_count(self) -> int:
        return len(self.strategy_counts)

    def distinct_profiles(self) -> list[Profile]:
        return sorted({obs.profile for obs in self.observations})


def validate_dataset(data: ObservationDataset) -> list[str]:
    """All invariant violations of the dataset, empty if well formed."""
    violations: list[str] = []
    n = data.player_count
    seen: dict[Profile, tuple[tuple[float, ...], tuple[float, ...]]] = {}
    for idx, obs in enumerate(data.observations):
        try:
            outcome_index(data.strategy_counts, obs.profile)
        except IndexError as exc:
            violations.append(f"observation {idx}: {exc}")
            continue
        if len(obs.agent_payoffs) != n or len(obs.principal_payoffs) != n:
            violations.append(f"observation {idx}: payoff vectors must have length {n}")
        if obs.mode not in ("joint", "solo"):
            violations.append(f"observation {idx}: unknown mode {obs.mode!r}")
        if (obs.mode == "solo") != (obs.solo_player is not None):
            violations.append(f"observation {idx}: solo_player present iff mode is solo")
        if obs.solo_player is not None and not 0 <= obs.solo_player < n:
            violations.append(f"observation {idx}: solo_player out of range")
        previous = seen.setdefault(obs.profile, (obs.agent_payoffs, obs.principal_payoffs))
        drift = max(
            (abs(a - b) for pair in zip(previous, (obs.agent_payoffs, obs.principal_payoffs))
             for a, b in zip(*pair)),
            default=0.0,
        )
        if drift > PAYOFF_CONSISTENCY_TOL:
            violations.append(
                f"observation {idx}: payoffs at repeated profile {obs.profile} disagree"
            )
    return violations


def _restricted_config(cfg: NormalizationConfig, support: int) -> NormalizationConfig:
    # The restricted measure is re-weighted uniformly over observed outcomes;
    # for plain l2/linf this leaves the config untouched.
    if cfg.norm_kind == "weighted_l2":
        return NormalizationConfig(cfg.shift_kind, "weighted_l2", uniform_weights(support))
    return cfg


class AlignmentEstimate(NamedTuple):
    ia: np.ndarray
    ca_agents: float
    ca_principals: float


def estimate_alignment(
    data: ObservationDataset, cfg: NormalizationConfig = DEFAULT_CONFIG
) -> AlignmentEstimate:
    """IA and CA computed exactly on the observed restriction of the utilities."""
    profiles = data.distinct_profiles()
    if len(profiles) < 2:
        raise InsufficientDataError("alignment estimation needs >= 2 distinct profiles")
    n = data.player_count
    by_profile = {obs.profile: obs for obs in data.observations}
    agents = np.array([[by_profile[p].agent_payoffs[i] for p in profiles] for i in range(n)])
    principals = np.array(
        [[by_profile[p].principal_payoffs[i] for p in profiles] for i in range(n)]
    )
    restricted = _restricted_config(cfg, len(profiles))
    ia = np.array(
        [
            1.0
            - 0.5
            * norm_distance(
                normalize(principals[i], restricted).direction,
                normalize(agents[i], restricted).direction,
                restricted,
            )
            for i in range(n)
        ]
    )
    ca_agents = measures.collective_alignment(agents, restricted)
    ca_principals = measures.collective_alignment(principals, restricted)
    return AlignmentEstimate(ia, ca_agents, ca_principals)


def estimate_cc_upper(data: ObservationDataset) -> float:
    """Upper bound on collective capability: worst over best observed joint welfare."""
    joint = [obs for obs in data.observations if obs.mode == "joint"]
    if not joint:
        raise InsufficientDataError("collective-capability estimation needs joint observations")
    payoffs = np.array([obs.agent_payoffs for obs in joint])
    if (payoffs < 0).any():
        raise PreconditionViolationError("capability estimators need nonnegative payoffs")
    welfares = payoffs.mean(axis=1)
    top = float(welfares.max())
    if top <= 0.0:
        raise PreconditionViolationError("maximum observed welfare is zero")
    return float(welfares.min()) / top


class IcEstimate(NamedTuple):
    values: np.ndarray
    low_coverage: tuple[bool, ...]


def estimate_ic_upper(data: ObservationDataset) -> IcEstimate:
    """Per-player upper bound on individual capability from solo observations.

    Observations are grouped by the other players' strategies; a group with a
    single own-strategy carries no comparison and is skipped.  Players with no
    comparable group get the vacuous bound 1 and are flagged.
    """
    n = data.player_count
    groups: list[dict[Profile, dict[int, float]]] = [dict() for _ in range(n)]
    for obs in data.observations:
        if obs.mode != "solo":
            continue
        i = obs.solo_player
        assert i is not None
        payoff = obs.agent_payoffs[i]
        if payoff < 0:
            raise PreconditionViolationError("capability estimators need nonnegative payoffs")
        counter = obs.profile[:i] + obs.profile[i + 1 :]
        groups[i].setdefault(counter, {})[obs.profile[i]] = payoff
    values = np.ones(n)
    low_coverage = []
    for i in range(n):
        best: float | None = None
        for own in groups[i].values():
            if len(own) < 2:
                continue
            top = max(own.values())
            # an all-zero group compares 0/0: every play trivially attains the max
            ratios = [u / top for u in own.values()] if top > 0 else [1.0]
            candidate = min(ratios)
            best = candidate if best is None else min(best, candidate)
        if best is None:
            low_coverage.append(True)
            warnings.warn(
                f"player {i}: no counter-profile observed with >= 2 own strategies; "
                "individual-capability bound is vacuous",
                DelegationWarning,
            )
        else:
            low_coverage.append(False)
            values[i] = best
    return IcEstimate(values, tuple(low_coverage))


def simulate_play(
    game: DelegationGame,
    ic: Sequence[float] | float,
    cc: float,
    count: int,
    mode_mix: float = 0.5,
    rng: np.random.Generator | None = None,
) -> ObservationDataset:
    """Draw observations of agents with capabilities (ic, cc) playing the game.

    Joint observations are uniform over the admissible outcome set; solo
    observations pair a uniform counter-profile with a uniform draw from the
    acting player's eps-best-response set.  ``mode_mix`` is the probability
    of a joint observation.
    """
    if count < 1:
        raise InvalidArgumentError("count must be at least 1")
    if not 0.0 <= mode_mix <= 1.0:
        raise InvalidArgumentError("mode_mix must lie in [0, 1]")
    rng = rng if rng is not None else np.random.default_rng()
    n = game.n
    ic = np.broadcast_to(np.asarray(ic, dtype=float), (n,))
    eps = 1.0 - ic
    admissible = admissible_outcomes(game, eps, cc)
    if not admissible:
        raise SimulationError("no pure outcome is consistent with the given capabilities")
    observations = []
    for _ in range(count):
        if rng.random() < mode_mix:
            profile = admissible[rng.integers(len(admissible))]
            mode, solo_player = "joint", None
        else:
            i = int(rng.integers(n))
            profile_list = [int(rng.integers(k)) for k in game.strategy_counts]
            own = _eps_best_responses(game, i, profile_list, eps[i])
            profile_list[i] = int(own[rng.integers(len(own))])
            profile = tuple(profile_list)
            mode, solo_player = "solo", i
        idx = game.index(profile)
        observations.append(
            Observation(
                profile=profile,
                agent_payoffs=tuple(float(v) for v in game.agent_payoffs[:, idx]),
                principal_payoffs=tuple(float(v) for v in game.principal_payoffs[:, idx]),
                mode=mode,
                solo_player=solo_player,
            )
        )
    return ObservationDataset(tuple(observations), game.strategy_counts)


def _eps_best_responses(
    game: DelegationGame, player: int, base_profile: list[int], eps: float
) -> list[int]:
    payoffs = np.empty(game.strategy_counts[player])
    probe = list(base_profile)
    for s in range(game.strategy_counts[player]):
        probe[player] = s
        payoffs[s] = game.agent_payoffs[player, game.index(probe)]
    span = payoffs.max() - payoffs.min()
    if span == 0:
        return list(range(game.strategy_counts[player]))
    lapse = (payoffs.max() - payoffs) / span
    return [int(s) for s in np.flatnonzero(lapse <= eps + EPS_TOL)]


@dataclass(frozen=True)
class MaeRow:
    """Mean absolute estimation error for one measure at one sample size."""

    measure: str
    sample_size: int
    mae: float
    ci_lo: float
    ci_hi: float


def _nonnegative(game: DelegationGame) -> DelegationGame:
    # Per-player shifts change neither alignment nor best-response structure,
    # but they let the ratio-based capability estimators apply.
    agents = game.agent_payoffs - game.agent_payoffs.min(axis=1, keepdims=True)
    principals = game.principal_payoffs - game.principal_payoffs.min(axis=1, keepdims=True)
    return DelegationGame(game.strategy_counts, agents, principals)


def sample_inference_trial(
    game_spec: GeneratorSpec,
    rng: np.random.Generator,
    max_attempts: int = 100,
) -> tuple[DelegationGame, np.ndarray, float]:
    """One nonnegative random game plus capability parameters it can realise."""
    for _ in range(max_attempts):
        spec = replace(
            game_spec,
            target_ia=tuple(rng.uniform(0.0, 1.0, game_spec.players)),
            target_principal_ca=float(rng.uniform(0.5, 1.0)),
        )
        game = _nonnegative(random_delegation_game(spec, rng))
        ic = rng.uniform(0.0, 1.0, game.n)
        cc = float(rng.uniform(0.0, 1.0))
        if admissible_outcomes(game, 1.0 - ic, cc):
            return game, ic, cc
    raise SimulationError("could not realise any capability parameters")


def mae_curve(
    game_count: int,
    game_spec: GeneratorSpec,
    sample_sizes: Sequence[int],
    cfg: NormalizationConfig = DEFAULT_CONFIG,
    rng: np.random.Generator | None = None,
    mode_mix: float = 0.5,
) -> list[MaeRow]:
    """Mean absolute error of all four estimated measures across fresh random games.

    Truth for the alignment measures comes from the exact measures on each
    generated game; truth for the capabilities is the simulation parameters.
    90% confidence intervals use the normal approximation over games.
    """
    sizes = list(sample_sizes)
    if sizes != sorted(sizes) or not sizes:
        raise InvalidArgumentError("sample_sizes must be a nonempty ascending list")
    rng = rng if rng is not None else np.random.default_rng()
    streams = rng.spawn(game_count)
    errors: dict[tuple[str, int], list[float]] = {}
    for g in range(game_count):
        child = streams[g]
        game, ic_true, cc_true = sample_inference_trial(game_spec, child)
        ia_true = measures.individual_alignment(game, cfg)
        ca_true = measures.collective_alignment(game.agent_payoffs, cfg)
        for size in sizes:
            data = _simulate_with_coverage(game, ic_true, cc_true, size, mode_mix, child)
            estimate = estimate_alignment(data, cfg)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DelegationWarning)
                ic_est = estimate_ic_upper(data).values
            cc_est = estimate_cc_upper(data)
            errors.setdefault(("ia", size), []).append(
                float(np.abs(estimate.ia - ia_true).mean())
            )
            errors.setdefault(("ca", size), []).append(abs(estimate.ca_agents - ca_true))
            errors.setdefault(("ic", size), []).append(float(np.abs(ic_est - ic_true).mean()))
            errors.setdefault(("cc", size), []).append(abs(cc_est - cc_true))
    rows = []
    for measure in ("ia", "ic", "ca", "cc"):
        for size in sizes:
            values = np.array(errors[(measure, size)])
            mae = float(values.mean())
            half = 1.645 * float(values.std(ddof=0)) / math.sqrt(len(values))
            rows.append(MaeRow(measure, size, mae, mae - half, mae + half))
    return rows


def _simulate_with_coverage(
    game: DelegationGame,
    ic: np.ndarray,
    cc: float,
    count: int,
    mode_mix: float,
    rng: np.random.Generator,
    max_attempts: int = 100,
) -> ObservationDataset:
    # redraw rather than fail when a tiny sample lands on a single profile
    for _ in range(max_attempts):
        data = simulate_play(game, ic, cc, count, mode_mix, rng)
        if len(data.distinct_profiles()) >= 2:
            return data
    raise SimulationError("simulated play never covered two distinct profiles")


def dataset_to_jsonl(data: ObservationDataset) -> str:
    """Serialise a dataset: a strategy-space header line, then one observation per line."""
    lines = [
        json.dumps(
            {"players": data.player_count, "strategies": list(data.strategy_counts)}
        )
    ]
    for obs in data.observations:
        lines.append(
            json.dumps(
                {
                    "profile": list(obs.profile),
                    "agent_payoffs": list(obs.agent_payoffs),
                    "principal_payoffs": list(obs.principal_payoffs),
                    "mode": obs.mode,
                    "solo_player": obs.solo_player,
                }
            )
        )
    return "\n".join(lines) + "\n"


def dataset_from_jsonl(text: str) -> ObservationDataset:
    """Parse the JSONL format produced by :func:`dataset_to_jsonl`."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise InvalidArgumentError("empty dataset file")
    header = json.loads(lines[0])
    if "strategies" not in header:
        raise InvalidArgumentError("first line must be a strategy-space header")
    counts = tuple(int(k) for k in header["strategies"])
    observations = []
    for line in lines[1:]:
        row = json.loads(line)
        observations.append(
            Observation(
                profile=tuple(int(s) for s in row["profile"]),
                agent_payoffs=tuple(float(v) for v in row["agent_payoffs"]),
                principal_payoffs=tuple(float(v) for v in row["principal_payoffs"]),
                mode=row["mode"],
                solo_player=row.get("solo_player"),
            )
        )
    data = ObservationDataset(tuple(observations), counts)
    problems = validate_dataset(data)
    if problems:
        raise InvalidArgumentError("; ".join(problems))
    return data
