"""Command-line interface.

Subcommands: ``analyze`` (measures + bounds for a game JSON), ``generate``
(random game with target alignments), ``sweep`` (the measure-sweep
experiment, CSV + figure), ``infer`` (estimates from an observation JSONL),
``infer-eval`` (estimator error curves, CSV + figure) and ``demo`` (a fully
worked 2x2 example).  Exit codes: 0 success, 1 usage error, 2 data or
precondition error.  ``DELEGATION_SEED`` overrides any ``--seed`` flag.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bounds, inference, measures
from .equilibria import pure_eps_nash
from .errors import (
    DelegationError,
    DelegationWarning,
    PreconditionViolationError,
)
from .game import DelegationGame, validate_game
from .generator import GeneratorSpec, make_worked_example, random_delegation_game
from .normalization import NormalizationConfig, normalize, uniform_weights
from .sweep import VARIED_MEASURES, SweepConfig, rows_to_csv, sweep as run_sweep

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we reserve that
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _add_norm_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--norm", choices=("l2", "linf", "wl2"), default="l2")
    parser.add_argument("--shift", choices=("mean", "midrange"), default="mean")
    parser.add_argument("--weights", help="JSON file with a probability vector over outcomes")


def _build_config(args, outcome_count: int) -> NormalizationConfig:
    norm = {"l2": "l2", "linf": "linf", "wl2": "weighted_l2"}[args.norm]
    weights = None
    if norm == "weighted_l2":
        if args.weights:
            weights = np.asarray(json.loads(Path(args.weights).read_text()), dtype=float)
        else:
            weights = uniform_weights(outcome_count)
    elif args.weights:
        raise DelegationError("--weights only applies to --norm wl2")
    return NormalizationConfig(shift_kind=args.shift, norm_kind=norm, weights=weights)


def _resolve_seed(args) -> int:
    env = os.environ.get("DELEGATION_SEED")
    return int(env) if env not in (None, "") else args.seed


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _load_game(path: str) -> DelegationGame:
    game = DelegationGame.from_json(Path(path).read_text())
    problems = validate_game(game)
    if problems:
        raise DelegationError("invalid game: " + "; ".join(problems))
    return game


def _read_played(path: str) -> list[tuple[int, ...]]:
    profiles = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        row = json.loads(line)
        if "profile" in row:
            profiles.append(tuple(int(s) for s in row["profile"]))
        elif "strategies" in row:
            continue  # dataset header line
        else:
            raise DelegationError("played file lines need a 'profile' field")
    if not profiles:
        raise DelegationError("played file contains no profiles")
    return profiles


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")
    if isinstance(value, tuple):
        return list(value)
    return value


def _write_output(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- analyze


def _cmd_analyze(args) -> int:
    game = _load_game(args.game)
    cfg = _build_config(args, game.n_outcomes)
    played = _read_played(args.played) if args.played else None
    result: dict = {}
    collected: list[str] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DelegationWarning)
        if played:
            report = measures.full_report(game, played, cfg)
            result.update(
                ia=_jsonable(report.ia),
                ic=_jsonable(report.ic),
                ca_agents=report.ca_agents,
                ca_principals=report.ca_principals,
                cc=report.cc,
                ratios=_jsonable(report.ratios),
                r_star=report.r_star,
            )
            collected.extend(report.warnings)
        else:
            ratios, r_star = measures.calibration_ratios(game, cfg)
            result.update(
                ia=_jsonable(measures.individual_alignment(game, cfg)),
                ic=None,
                ca_agents=measures.collective_alignment(game.agent_payoffs, cfg),
                ca_principals=measures.collective_alignment(game.principal_payoffs, cfg),
                cc=None,
                ratios=_jsonable(ratios),
                r_star=r_star,
            )
            if not cfg.strictly_convex:
                collected.append(
                    "non-strictly-convex norm: misalignment extremes are not exclusive"
                )
        result["landmarks"] = measures.report_landmarks(game)
        report_bounds = bounds.bound_report(game, played, cfg, delta=args.delta)
        raw = {
            "alignment_bound": report_bounds.alignment_bound,
            "capabilities_bound": report_bounds.capabilities_bound,
            "ideal_gap_bound": report_bounds.ideal_gap_bound,
            "remainder_exact": report_bounds.remainder_exact,
            "remainder_bound": report_bounds.remainder_bound,
            "robustness_gap": report_bounds.robustness_gap,
        }
        result["bounds"] = raw
        # same values rescaled to the principal [w_minus, w_plus] span
        lm = result["landmarks"]["principals"]
        span = lm["w_plus"] - lm["w_minus"]
        result["bounds_normalized"] = {
            key: (None if value is None or span <= 0 else value / span)
            for key, value in raw.items()
        }
        collected.extend(str(w.message) for w in caught)
    result["warnings"] = collected
    _write_output(json.dumps(result, indent=2) + "\n", args.output)
    return 0


# ---------------------------------------------------------------- generate


def _cmd_generate(args) -> int:
    counts = _parse_int_list(args.strategies)
    players = args.players if args.players is not None else len(counts)
    if len(counts) == 1 and players > 1:
        counts = counts * players
    ia = _parse_float_list(args.ia)
    if len(ia) == 1:
        ia = ia * players
    spec = GeneratorSpec(
        players=players,
        strategy_counts=tuple(counts),
        target_ia=tuple(ia),
        target_principal_ca=args.ca,
        magnitude_range=tuple(_parse_float_list(args.magnitude_range)),
        shift_range=tuple(_parse_float_list(args.shift_range)),
        seed=_resolve_seed(args),
    )
    game = random_delegation_game(spec)
    _write_output(game.to_json() + "\n", args.output)
    return 0


def _parse_float_list(text: str) -> list[float]:
    return [float(part) for part in str(text).split(",") if str(part).strip()]


# ---------------------------------------------------------------- sweep


def _cmd_sweep(args) -> int:
    counts = tuple(_parse_int_list(args.strategies))
    template = GeneratorSpec(
        players=len(counts),
        strategy_counts=counts,
        target_ia=(args.fixed,) * len(counts),
        target_principal_ca=args.fixed,
    )
    config = SweepConfig(
        varied_measure=args.vary,
        fixed_value=args.fixed,
        steps=args.steps,
        games_per_step=args.games,
        generator_spec=template,
        seed=_resolve_seed(args),
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DelegationWarning)
        rows = run_sweep(config)
    _write_output(rows_to_csv(rows), args.output)
    _maybe_plot(args, rows, "sweep")
    return 0


def _maybe_plot(args, rows, kind: str) -> None:
    if args.no_plot:
        return
    path = args.plot
    if path is None and args.output:
        path = str(Path(args.output).with_suffix(".png"))
    if path is None:
        return
    from . import plots  # deferred: matplotlib import is slow

    if kind == "sweep":
        plots.render_sweep_figure(rows, path)
    else:
        plots.render_mae_figure(rows, path)


# ---------------------------------------------------------------- infer


def _cmd_infer(args) -> int:
    data = inference.dataset_from_jsonl(Path(args.dataset).read_text())
    cfg = _build_config(args, len(data.distinct_profiles()))
    alignment = inference.estimate_alignment(data, cfg)
    result = {
        "ia": _jsonable(alignment.ia),
        "ca_agents": alignment.ca_agents,
        "ca_principals": alignment.ca_principals,
    }
    notes: list[str] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DelegationWarning)
        try:
            ic = inference.estimate_ic_upper(data)
            result["ic_upper"] = _jsonable(ic.values)
            result["ic_low_coverage"] = list(ic.low_coverage)
        except (PreconditionViolationError, DelegationError) as exc:
            result["ic_upper"] = None
            notes.append(f"individual-capability bound unavailable: {exc}")
        try:
            result["cc_upper"] = inference.estimate_cc_upper(data)
        except (PreconditionViolationError, DelegationError) as exc:
            result["cc_upper"] = None
            notes.append(f"collective-capability bound unavailable: {exc}")
        notes.extend(str(w.message) for w in caught)
    result["warnings"] = notes
    _write_output(json.dumps(result, indent=2) + "\n", args.output)
    return 0


# ---------------------------------------------------------------- infer-eval


def _cmd_infer_eval(args) -> int:
    counts = tuple(_parse_int_list(args.strategies))
    template = GeneratorSpec(
        players=len(counts),
        strategy_counts=counts,
        target_ia=(0.9,) * len(counts),
        target_principal_ca=0.9,
    )
    sizes = _parse_int_list(args.sizes)
    rng = np.random.default_rng(_resolve_seed(args))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DelegationWarning)
        rows = inference.mae_curve(args.games, template, sizes, rng=rng, mode_mix=args.mode_mix)
    lines = ["measure,sample_size,mae,ci_lo,ci_hi"]
    for row in rows:
        lines.append(
            f"{row.measure},{row.sample_size},{row.mae:.17g},{row.ci_lo:.17g},{row.ci_hi:.17g}"
        )
    _write_output("\n".join(lines) + "\n", args.output)
    _maybe_plot(args, rows, "mae")
    return 0


# ---------------------------------------------------------------- demo


def _frac(x: float) -> str:
    frac = Fraction(x).limit_denominator(10_000)
    return str(frac) if abs(float(frac) - x) < 1e-9 else f"{x:.6g}"


def _table(vector, counts) -> str:
    grid = np.asarray(vector).reshape(counts)
    return "\n".join("  " + "  ".join(f"{_frac(v):>6}" for v in row) for row in grid)


def _cmd_demo(args) -> int:
    game = make_worked_example()
    cfg = NormalizationConfig(shift_kind="midrange", norm_kind="linf")
    out = []
    out.append("Worked example: two route-choosing agents acting for two passengers")
    out.append("(max-norm + midrange normalisation for clean fractions)\n")
    for side, table in (("Agent", game.agent_payoffs), ("Principal", game.principal_payoffs)):
        for i in range(2):
            out.append(f"{side} {i + 1} payoffs:")
            out.append(_table(table[i], game.strategy_counts))
    report = measures.full_report(game, [(0, 0)], cfg)
    out.append("\nNormalisation (shift c, magnitude m, direction):")
    for side, table, tag in (
        ("agent", game.agent_payoffs, "m"),
        ("principal", game.principal_payoffs, "m-hat"),
    ):
        for i in range(2):
            norm = normalize(table[i], cfg)
            out.append(
                f"  {side} {i + 1}: c = {_frac(norm.shift)}, {tag} = {_frac(norm.magnitude)}, "
                f"direction = ({', '.join(_frac(v) for v in norm.direction)})"
            )
    out.append(f"\nIndividual alignment IA = ({', '.join(_frac(v) for v in report.ia)})")
    out.append("Welfare proxy (agents):")
    out.append(_table(report.welfare_proxy, game.strategy_counts))
    out.append(f"Collective alignment CA (agents) = {_frac(report.ca_agents)}")
    out.append(f"Collective alignment CA (principals) = {_frac(report.ca_principals)}")
    out.append(
        f"Calibration ratios r = ({', '.join(_frac(v) for v in report.ratios)}), "
        f"r* = {_frac(report.r_star)}"
        "  [r[i] = principal magnitude / agent magnitude]"
    )
    landmarks = measures.report_landmarks(game)
    for side in ("agents", "principals"):
        lm = landmarks[side]
        out.append(
            f"Landmarks ({side}): w* = {_frac(lm['w_star'])}, w-bullet = {_frac(lm['w_bullet'])}, "
            f"w+ = {_frac(lm['w_plus'])}, w- = {_frac(lm['w_minus'])}"
        )
    nash = pure_eps_nash(game, np.zeros(2))
    out.append(f"\nPure Nash equilibria: {[p for p in nash.profiles]} (A = 0, B = 1)")
    eps = (0.1, 0.3)
    relaxed = pure_eps_nash(game, np.array(eps))
    out.append(
        f"Pure eps-NE at eps = {eps}: {[p for p in relaxed.profiles]}, "
        f"worst welfare = {_frac(relaxed.min_welfare)}"
    )
    achieved = 3.5
    cc = measures.collective_capability(game, achieved, np.array(eps))
    out.append(f"Collective capability at achieved welfare {achieved}: CC = {_frac(cc)}")
    align_bound = bounds.alignment_regret_bound(game, (0, 0), cfg)
    regret = landmarks["principals"]["w_star"] - game.principal_welfare((0, 0))
    out.append(
        f"\nAlignment regret bound at (A, A): {_frac(align_bound)} "
        f"(actual principal regret {_frac(regret)})"
    )
    out.append(f"Remainder bound: {_frac(bounds.remainder_bound(game, cfg))}")
    gap_bound = bounds.ideal_gap_bound(game.agent_payoffs, cfg)
    out.append(f"Ideal-gap bound (agents): {_frac(gap_bound)} (actual gap 2)")
    sys.stdout.write("\n".join(out) + "\n")
    return 0


# ---------------------------------------------------------------- wiring


def build_parser() -> _Parser:
    parser = _Parser(prog="delegation-games")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="measures and bounds for a game JSON")
    analyze.add_argument("game")
    _add_norm_flags(analyze)
    analyze.add_argument("--played", help="JSONL file of observed profiles")
    analyze.add_argument("--delta", type=float, default=None,
                         help="eps-NE ball radius for the robustness bound")
    analyze.add_argument("-o", "--output")
    analyze.set_defaults(func=_cmd_analyze)

    generate = sub.add_parser("generate", help="random game with target alignments")
    generate.add_argument("--players", type=int, default=None)
    generate.add_argument("--strategies", default="3,3", help="comma-separated counts")
    generate.add_argument("--ia", default="0.9", help="target IA (single value or per player)")
    generate.add_argument("--ca", type=float, default=0.9, help="target principal CA")
    generate.add_argument("--magnitude-range", default="0.5,1.5")
    generate.add_argument("--shift-range", default="-1,1")
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("-o", "--output")
    generate.set_defaults(func=_cmd_generate)

    sweep_parser = sub.add_parser("sweep", help="vary one measure, record welfare + bounds")
    sweep_parser.add_argument("--vary", required=True, choices=VARIED_MEASURES)
    sweep_parser.add_argument("--fixed", type=float, default=0.9)
    sweep_parser.add_argument("--steps", type=int, default=11)
    sweep_parser.add_argument("--games", type=int, default=25)
    sweep_parser.add_argument("--strategies", default="3,3")
    sweep_parser.add_argument("--seed", type=int, default=0)
    sweep_parser.add_argument("-o", "--output")
    sweep_parser.add_argument("--plot", help="explicit figure path (default: CSV path with .png)")
    sweep_parser.add_argument("--no-plot", action="store_true")
    sweep_parser.set_defaults(func=_cmd_sweep)

    infer = sub.add_parser("infer", help="estimate measures from an observation JSONL")
    infer.add_argument("dataset")
    _add_norm_flags(infer)
    infer.add_argument("-o", "--output")
    infer.set_defaults(func=_cmd_infer)

    infer_eval = sub.add_parser("infer-eval", help="estimator error curves over random games")
    infer_eval.add_argument("--games", type=int, default=100)
    infer_eval.add_argument("--sizes", default="10,100,1000")
    infer_eval.add_argument("--strategies", default="3,3")
    infer_eval.add_argument("--mode-mix", type=float, default=0.5)
    infer_eval.add_argument("--seed", type=int, default=0)
    infer_eval.add_argument("-o", "--output")
    infer_eval.add_argument("--plot")
    infer_eval.add_argument("--no-plot", action="store_true")
    infer_eval.set_defaults(func=_cmd_infer_eval)

    demo = sub.add_parser("demo", help="walk through the documented 2x2 example")
    demo.set_defaults(func=_cmd_demo)

    return parser


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (DelegationError, OSError, json.JSONDecodeError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
