"""Command-line surface: scenario files, simulation reports, count analysis.

Three subcommands:

* ``pattern <scenario.json>`` renders the exact per-bin pattern as CSV.
* ``simulate <scenario.json> --out report.json`` runs the Monte Carlo
  experiment and writes a JSON report that round-trips byte-identically.
* ``analyze <S.csv> <S1.csv> <S2.csv>`` decomposes externally supplied
  count histograms.

Exit codes: 0 success, 2 input/parse error, 3 runtime or statistical error.
Tabular output uses 15 significant digits; JSON reports use shortest
round-trip float rendering with sorted keys, so parse/re-serialize is
byte-identical. If the environment variable ``CTXPROB_OUT_DIR`` is set,
relative ``--out`` paths are resolved under it.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from .errors import ContextualError, ScenarioError
from .core import EnsembleCounts, OutcomeSpace
from .interference import Hyperbolic, kind_label
from .twoslit import (
    ExperimentReport,
    ExplicitPhase,
    FreeWavePhase,
    GridSpec,
    TwoSlitScenario,
    decompose_empirical,
    gaussian_envelope,
    run_experiment,
    table_envelope,
    uniform_envelope,
    validate_scenario,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RUNTIME = 3

ENV_OUT_DIR = "CTXPROB_OUT_DIR"

PATTERN_HEADER = ["x", "p1", "p2", "theta", "p_classical", "p_interference"]
ANALYZE_HEADER = [
    "bin", "p_hat_S", "p_hat_1", "p_hat_2", "delta", "lambda", "kind", "theta", "stderr_lambda",
]


def fmt15(value: float) -> str:
    """Render a float with 15 significant digits."""
    return format(value, ".15g")


def _opt(value: float | None) -> str:
    return "" if value is None else fmt15(value)


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------

class _FieldErrors:
    def __init__(self) -> None:
        self.problems: list[tuple[str, str]] = []

    def add(self, path: str, message: str) -> None:
        self.problems.append((path, message))

    def raise_if_any(self) -> None:
        if self.problems:
            raise ScenarioError(self.problems)


def _get(doc: dict, path: str, key: str, kind, errors: _FieldErrors, default=None, required=True):
    here = f"{path}.{key}" if path else key
    if key not in doc:
        if required:
            errors.add(here, "missing")
        return default
    value = doc[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            errors.add(here, f"expected a number, got {value!r}")
            return default
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            errors.add(here, f"expected an integer, got {value!r}")
            return default
        return value
    if kind is dict:
        if not isinstance(value, dict):
            errors.add(here, f"expected an object, got {value!r}")
            return default
        return value
    if kind is list:
        if not isinstance(value, list):
            errors.add(here, f"expected an array, got {value!r}")
            return default
        return value
    if kind is str:
        if not isinstance(value, str):
            errors.add(here, f"expected a string, got {value!r}")
            return default
        return value
    raise AssertionError(kind)


def _parse_envelope(doc: dict, path: str, grid: GridSpec | None, errors: _FieldErrors):
    kind = _get(doc, path, "kind", str, errors)
    if kind is None:
        return None
    if kind == "gaussian":
        mean = _get(doc, path, "mean", float, errors)
        sigma = _get(doc, path, "sigma", float, errors)
        if sigma is not None and sigma <= 0.0:
            errors.add(f"{path}.sigma", f"must be positive, got {sigma!r}")
            return None
        if None in (mean, sigma) or grid is None:
            return None
        try:
            return gaussian_envelope(grid, mean, sigma)
        except ValueError as exc:
            errors.add(path, str(exc))
            return None
    if kind == "uniform":
        return uniform_envelope(grid) if grid is not None else None
    if kind == "table":
        values = _get(doc, path, "values", list, errors)
        if values is None:
            return None
        if grid is not None and len(values) != grid.bins:
            errors.add(f"{path}.values", f"{len(values)} values for {grid.bins} bins")
            return None
        try:
            return table_envelope(values)
        except (TypeError, ValueError) as exc:
            errors.add(f"{path}.values", str(exc))
            return None
    errors.add(f"{path}.kind", f"unknown envelope kind {kind!r}")
    return None


def _parse_phase(doc: dict, grid: GridSpec | None, errors: _FieldErrors):
    kind = _get(doc, "phase", "kind", str, errors)
    if kind is None:
        return None
    if kind == "explicit":
        values = _get(doc, "phase", "values", list, errors)
        if values is None:
            return None
        if grid is not None and len(values) != grid.bins:
            errors.add("phase.values", f"{len(values)} values for {grid.bins} bins")
            return None
        try:
            return ExplicitPhase(tuple(values))
        except (TypeError, ValueError) as exc:
            errors.add("phase.values", str(exc))
            return None
    if kind == "freewave":
        p1 = _get(doc, "phase", "p1", float, errors)
        p2 = _get(doc, "phase", "p2", float, errors)
        h = _get(doc, "phase", "h", float, errors, default=1.0, required=False)
        if None in (p1, p2, h):
            return None
        return FreeWavePhase(p1, p2, h)
    errors.add("phase.kind", f"unknown phase kind {kind!r}")
    return None


def parse_scenario(doc: dict) -> TwoSlitScenario:
    """Build a scenario from a parsed configuration document.

    Raises:
        ScenarioError: with one (field, message) pair per problem.
    """
    errors = _FieldErrors()
    if not isinstance(doc, dict):
        errors.add("", f"expected a JSON object, got {doc!r}")
        errors.raise_if_any()

    grid_doc = _get(doc, "", "grid", dict, errors)
    grid = None
    if grid_doc is not None:
        bins = _get(grid_doc, "grid", "bins", int, errors)
        x_min = _get(grid_doc, "grid", "x_min", float, errors)
        x_max = _get(grid_doc, "grid", "x_max", float, errors)
        if bins is not None and bins < 1:
            errors.add("grid.bins", f"need at least 1 bin, got {bins!r}")
            bins = None
        if None not in (x_min, x_max) and not x_max > x_min:
            errors.add("grid.range", f"x_max {x_max!r} must exceed x_min {x_min!r}")
            x_min = None
        if None not in (bins, x_min, x_max):
            grid = GridSpec(bins, x_min, x_max)

    env_doc = _get(doc, "", "envelopes", dict, errors)
    env1 = env2 = None
    if env_doc is not None:
        slit1 = _get(env_doc, "envelopes", "slit1", dict, errors)
        slit2 = _get(env_doc, "envelopes", "slit2", dict, errors)
        if slit1 is not None:
            env1 = _parse_envelope(slit1, "envelopes.slit1", grid, errors)
        if slit2 is not None:
            env2 = _parse_envelope(slit2, "envelopes.slit2", grid, errors)

    phase_doc = _get(doc, "", "phase", dict, errors)
    phase = _parse_phase(phase_doc, grid, errors) if phase_doc is not None else None

    sampling = _get(doc, "", "sampling", dict, errors)
    n_emitted = runs = seed = None
    if sampling is not None:
        n_emitted = _get(sampling, "sampling", "n_emitted", int, errors)
        runs = _get(sampling, "sampling", "runs", int, errors, default=1, required=False)
        seed = _get(sampling, "sampling", "seed", int, errors, default=0, required=False)

    errors.raise_if_any()
    scenario = TwoSlitScenario(grid, env1, env2, phase, n_emitted, runs, seed)
    violations = validate_scenario(scenario)
    if violations:
        raise ScenarioError([(v.invariant, v.message) for v in violations])
    return scenario


def load_scenario(path: str) -> TwoSlitScenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError([(path, f"cannot read scenario file: {exc}")])
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError([(path, f"invalid JSON: {exc}")])
    return parse_scenario(doc)


# ---------------------------------------------------------------------------
# Report documents
# ---------------------------------------------------------------------------

def scenario_document(scenario: TwoSlitScenario) -> dict:
    """Canonical resolved echo of a scenario (envelopes and phases expanded)."""
    if isinstance(scenario.phase, ExplicitPhase):
        phase: dict = {"kind": "explicit"}
    else:
        phase = {
            "kind": "freewave",
            "p1": scenario.phase.momentum1,
            "p2": scenario.phase.momentum2,
            "h": scenario.phase.scaling,
        }
    phase["theta"] = [float(t) for t in scenario.phase_table()]
    return {
        "grid": {
            "bins": scenario.grid.bins,
            "x_min": scenario.grid.x_min,
            "x_max": scenario.grid.x_max,
        },
        "envelope1": list(scenario.envelope1),
        "envelope2": list(scenario.envelope2),
        "phase": phase,
        "sampling": {
            "n_emitted": scenario.n_emitted,
            "runs": scenario.runs,
            "seed": scenario.seed,
        },
        "splitting": {"c1": scenario.coeffs.c1, "c2": scenario.coeffs.c2},
    }


def _counts_document(counts: EnsembleCounts) -> dict:
    return {
        "context": counts.context_id,
        "total_emitted": counts.total_emitted,
        "total_detected": counts.total_detected,
        "counts": {label: int(n) for label, n in counts.counts.items()},
    }


def _bin_document(est) -> dict:
    return {
        "bin": est.bin,
        "x": est.x,
        "p_s": est.p_s,
        "p_1": est.p_1,
        "p_2": est.p_2,
        "classical": est.classical,
        "delta": est.delta,
        "lambda": est.lam,
        "kind": kind_label(est.kind),
        "sign": est.kind.sign if isinstance(est.kind, Hyperbolic) else None,
        "theta": est.theta,
        "stderr_lambda": est.stderr_lambda,
        "stderr_theta": est.stderr_theta,
        "z": est.z,
    }


def report_document(report: ExperimentReport) -> dict:
    return {
        "counts": {
            "S": _counts_document(report.counts_s),
            "S1": _counts_document(report.counts_s1),
            "S2": _counts_document(report.counts_s2),
        },
        "splitting": {
            "c1": report.coeffs.c1,
            "c2": report.coeffs.c2,
            "deviation": report.coeff_deviation,
            "empirical": report.coeffs.empirical,
        },
        "pattern_normalization": report.pattern_normalization,
        "violation_statistic": report.violation_statistic,
        "classification_tol": report.classification_tol,
        "bins": [_bin_document(est) for est in report.bins],
    }


def render_json(doc: dict) -> str:
    """Canonical JSON rendering: sorted keys, two-space indent, newline."""
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def simulation_document(scenario: TwoSlitScenario, report: ExperimentReport) -> dict:
    return {
        "tool": {"name": "ctxprob", "version": __version__},
        "scenario": scenario_document(scenario),
        "report": report_document(report),
    }


# ---------------------------------------------------------------------------
# Tabular output
# ---------------------------------------------------------------------------

def pattern_rows(scenario: TwoSlitScenario) -> list[list[str]]:
    """Per-bin table of envelopes, phase, and both combination rules.

    ``p_classical`` is the plain mixture ``(p1 + p2) / 2``;
    ``p_interference`` adds the cosine cross term. Both are the raw per-bin
    formula values, before any grid renormalization.
    """
    x = scenario.grid.midpoints()
    theta = scenario.phase_table()
    rows = []
    for i in range(scenario.grid.bins):
        p1 = scenario.envelope1[i]
        p2 = scenario.envelope2[i]
        classical = 0.5 * (p1 + p2)
        full = 0.5 * (p1 + p2 + 2.0 * math.sqrt(p1 * p2) * math.cos(theta[i]))
        rows.append(
            [fmt15(float(x[i])), fmt15(p1), fmt15(p2), fmt15(float(theta[i])),
             fmt15(classical), fmt15(full)]
        )
    return rows


def analyze_lines(report: ExperimentReport) -> list[str]:
    """Analysis table plus '#'-prefixed summary lines."""
    lines = [",".join(ANALYZE_HEADER)]
    for est in report.bins:
        kind = kind_label(est.kind)
        if isinstance(est.kind, Hyperbolic) and est.kind.sign < 0:
            kind = "hyperbolic-"
        elif isinstance(est.kind, Hyperbolic):
            kind = "hyperbolic+"
        lines.append(
            ",".join(
                [
                    est.bin,
                    fmt15(est.p_s),
                    fmt15(est.p_1),
                    fmt15(est.p_2),
                    fmt15(est.delta),
                    _opt(est.lam),
                    kind,
                    _opt(est.theta),
                    _opt(est.stderr_lambda),
                ]
            )
        )
    lines.append(f"# splitting_c1 = {fmt15(report.coeffs.c1)}")
    lines.append(f"# splitting_c2 = {fmt15(report.coeffs.c2)}")
    lines.append(f"# splitting_deviation = {fmt15(report.coeff_deviation)}")
    lines.append(f"# violation_statistic = {fmt15(report.violation_statistic)}")
    return lines


def read_counts_csv(path: str, context_id: str) -> EnsembleCounts:
    """Read a ``bin,count`` histogram file.

    Raises:
        ScenarioError: on missing file, bad header, duplicate bins, or
            malformed counts.
    """
    problems: list[tuple[str, str]] = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError([(path, f"cannot read counts file: {exc}")])
    reader = csv.reader(text.splitlines())
    rows = [row for row in reader if row]
    if not rows or [cell.strip() for cell in rows[0]] != ["bin", "count"]:
        raise ScenarioError([(path, "first row must be the header 'bin,count'")])
    counts: dict[str, int] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            problems.append((f"{path}:{lineno}", f"expected 2 fields, got {len(row)}"))
            continue
        label, value = row[0], row[1]
        if label in counts:
            problems.append((f"{path}:{lineno}", f"duplicate bin {label!r}"))
            continue
        try:
            n = int(value)
        except ValueError:
            problems.append((f"{path}:{lineno}", f"count {value!r} is not an integer"))
            continue
        if n < 0:
            problems.append((f"{path}:{lineno}", f"count {n} is negative"))
            continue
        counts[label] = n
    if problems:
        raise ScenarioError(problems)
    if not counts:
        raise ScenarioError([(path, "no data rows")])
    total = sum(counts.values())
    return EnsembleCounts(context_id, counts, total)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _resolve_out(out: str | None) -> Path | None:
    if out is None:
        return None
    path = Path(out)
    base = os.environ.get(ENV_OUT_DIR)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _emit(text: str, out: str | None) -> None:
    path = _resolve_out(out)
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def cmd_pattern(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = _override_seed(scenario, args.seed)
    lines = [",".join(PATTERN_HEADER)]
    lines.extend(",".join(row) for row in pattern_rows(scenario))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _override_seed(scenario: TwoSlitScenario, seed: int) -> TwoSlitScenario:
    return TwoSlitScenario(
        scenario.grid,
        scenario.envelope1,
        scenario.envelope2,
        scenario.phase,
        scenario.n_emitted,
        scenario.runs,
        seed,
    )


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = _override_seed(scenario, args.seed)
    report = run_experiment(scenario, tol=args.tol, workers=args.workers)
    doc = simulation_document(scenario, report)
    _emit(render_json(doc), args.out)
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    counts_s = read_counts_csv(args.counts_s, "S")
    counts_s1 = read_counts_csv(args.counts_s1, "S1")
    counts_s2 = read_counts_csv(args.counts_s2, "S2")
    bins = list(counts_s.counts)
    for path, other in ((args.counts_s1, counts_s1), (args.counts_s2, counts_s2)):
        if set(other.counts) != set(bins):
            missing = sorted(set(bins) ^ set(other.counts))
            raise ScenarioError(
                [(path, f"bin labels do not match the pooled file (first differences: {missing[:5]})")]
            )
    space = OutcomeSpace(tuple(bins))
    report = decompose_empirical(space, counts_s, counts_s1, counts_s2, tol=args.tol)
    _emit("\n".join(analyze_lines(report)) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctxprob",
        description="Contextual probability calculus and two-slit ensemble simulator.",
    )
    parser.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    parser.add_argument(
        "--tol", type=float, default=1e-9, help="classification tolerance around |lambda| = 1"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pattern", help="render the exact per-bin pattern as CSV")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("simulate", help="run the Monte Carlo experiment")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--out", default=None, help="report file (default: stdout)")
    p.add_argument("--workers", type=int, default=1, help="thread count for (context, run) tasks")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="decompose three count histograms")
    p.add_argument("counts_s", help="pooled-context counts CSV (bin,count)")
    p.add_argument("counts_s1", help="first branch counts CSV")
    p.add_argument("counts_s2", help="second branch counts CSV")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        for path, message in exc.problems:
            print(f"error: {path}: {message}", file=sys.stderr)
        return EXIT_INPUT
    except ContextualError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def entrypoint() -> None:
    raise SystemExit(main())
