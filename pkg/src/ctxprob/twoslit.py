"""Monte Carlo simulator for the two-slit contextual experiment.

The experiment is modeled generatively, with no particle dynamics, detector
model or geometry beyond a one-dimensional detection line: a uniform bin
grid, two envelope densities ``p1(x)`` and ``p2(x)`` (the patterns observed
with only one opening active), a phase model ``theta(x)``, and sampling
sizes. The source is symmetric with respect to the two openings, which fixes
the splitting coefficients to ``(1/2, 1/2)``.

One simulated *run* is one collection period: under the pooled context every
emitted particle is detected and lands in a bin drawn from the interference
pattern; under a branch context each emitted particle first survives an
acceptance draw with probability 1/2 (only one opening is active, so on
average half the systems come through) and the survivors land in bins drawn
from that branch's envelope. Contexts are sampled independently.

Each (context, run) pair gets its own counter-derived random stream keyed by
``(seed, context index, run index)``, so runs may be executed concurrently in
any order and the aggregate result is identical to sequential execution.

The analysis half estimates every contextual quantity from the simulated (or
externally supplied) histograms: splitting coefficients with their sharing
deviation, per-bin perturbation and normalized coefficient with binomial
standard errors, and a violation statistic measuring, in standard-error
units, how far the pooled distribution departs from the mixture of the
branch distributions.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    ContextualDistribution,
    ContextualModel,
    EnsembleCounts,
    OutcomeSpace,
    SplittingCoefficients,
    Violation,
    empirical_distribution,
    estimate_splitting,
)
from .errors import ScenarioError, ZeroEnsemble
from .interference import (
    Boundary,
    Degenerate,
    Hyperbolic,
    Trigonometric,
    decompose,
)

CONTEXT_IDS = ("S", "S1", "S2")
_CONTEXT_INDEX = {"S": 0, "S1": 1, "S2": 2}

#: Acceptance probability of a branch context; half the emitted systems
#: reach the screen when only one opening is active.
BRANCH_ACCEPTANCE = 0.5

ENVELOPE_SUM_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class GridSpec:
    """Uniform one-dimensional bin grid on the detection line."""

    bins: int
    x_min: float
    x_max: float

    @property
    def width(self) -> float:
        return (self.x_max - self.x_min) / self.bins

    def midpoints(self) -> np.ndarray:
        i = np.arange(self.bins)
        return self.x_min + (i + 0.5) * self.width

    def labels(self) -> tuple[str, ...]:
        return tuple(repr(float(x)) for x in self.midpoints())

    def outcome_space(self) -> OutcomeSpace:
        return OutcomeSpace(self.labels())


@dataclass(frozen=True, slots=True)
class ExplicitPhase:
    """Phase given directly as a per-bin table."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))


@dataclass(frozen=True, slots=True)
class FreeWavePhase:
    """Linear phases, one per branch: ``xi_j(x) = momentum_j * x / scaling``.

    The resulting phase difference is
    ``theta(x) = (momentum1 - momentum2) * x / scaling``.
    """

    momentum1: float
    momentum2: float
    scaling: float = 1.0


PhaseModel = ExplicitPhase | FreeWavePhase


@dataclass(frozen=True)
class TwoSlitScenario:
    """Geometry-free generative description of the two-slit experiment.

    ``envelope1``/``envelope2`` are per-bin densities aligned with the grid,
    each summing to 1 over the grid. ``n_emitted`` is the number of particles
    the source emits per context per run. The splitting coefficients are
    fixed at ``(1/2, 1/2)`` by the symmetric-source assumption.
    """

    grid: GridSpec
    envelope1: tuple[float, ...]
    envelope2: tuple[float, ...]
    phase: PhaseModel
    n_emitted: int
    runs: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "envelope1", tuple(float(v) for v in self.envelope1))
        object.__setattr__(self, "envelope2", tuple(float(v) for v in self.envelope2))

    @property
    def coeffs(self) -> SplittingCoefficients:
        return SplittingCoefficients(0.5, 0.5)

    def phase_table(self) -> np.ndarray:
        """Per-bin phase difference ``theta(x)``."""
        if isinstance(self.phase, ExplicitPhase):
            return np.asarray(self.phase.values, dtype=float)
        x = self.grid.midpoints()
        return (self.phase.momentum1 - self.phase.momentum2) * x / self.phase.scaling


def gaussian_envelope(grid: GridSpec, mean: float, sigma: float) -> tuple[float, ...]:
    """Gaussian density evaluated at bin midpoints, normalized over the grid."""
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    x = grid.midpoints()
    v = np.exp(-0.5 * ((x - mean) / sigma) ** 2)
    total = float(v.sum())
    if total <= 0.0:
        raise ValueError("gaussian envelope underflows to zero on this grid")
    return tuple(float(p) for p in v / total)


def uniform_envelope(grid: GridSpec) -> tuple[float, ...]:
    """Flat density over the grid."""
    return (1.0 / grid.bins,) * grid.bins


def table_envelope(values) -> tuple[float, ...]:
    """Arbitrary nonnegative per-bin weights, normalized by their sum."""
    v = [float(p) for p in values]
    if any(p < 0.0 for p in v):
        raise ValueError("table envelope has negative entries")
    total = sum(v)
    if total <= 0.0:
        raise ValueError("table envelope sums to zero")
    return tuple(p / total for p in v)


def validate_scenario(scenario: TwoSlitScenario) -> list[Violation]:
    out: list[Violation] = []
    grid = scenario.grid
    if grid.bins < 1:
        out.append(Violation("grid.bins", f"need at least 1 bin, got {grid.bins!r}"))
    if not grid.x_max > grid.x_min:
        out.append(
            Violation("grid.range", f"x_max {grid.x_max!r} must exceed x_min {grid.x_min!r}")
        )
    for name, env in (("envelope1", scenario.envelope1), ("envelope2", scenario.envelope2)):
        if len(env) != grid.bins:
            out.append(
                Violation(f"{name}.length", f"{len(env)} values for {grid.bins} bins")
            )
            continue
        if any(p < 0.0 for p in env):
            out.append(Violation(f"{name}.nonnegative", "envelope has negative entries"))
        total = sum(env)
        if abs(total - 1.0) > ENVELOPE_SUM_TOL:
            out.append(
                Violation(
                    f"{name}.normalized",
                    f"envelope sums to {total!r}, not 1 within {ENVELOPE_SUM_TOL}",
                    value=total,
                )
            )
    if isinstance(scenario.phase, ExplicitPhase):
        if len(scenario.phase.values) != grid.bins:
            out.append(
                Violation(
                    "phase.length",
                    f"{len(scenario.phase.values)} phases for {grid.bins} bins",
                )
            )
        if any(not math.isfinite(v) for v in scenario.phase.values):
            out.append(Violation("phase.finite", "phase table has non-finite entries"))
    else:
        if scenario.phase.scaling <= 0.0:
            out.append(
                Violation("phase.scaling", f"scaling must be positive, got {scenario.phase.scaling!r}")
            )
        if not (math.isfinite(scenario.phase.momentum1) and math.isfinite(scenario.phase.momentum2)):
            out.append(Violation("phase.momenta", "momenta must be finite"))
    if scenario.n_emitted < 0:
        out.append(Violation("sampling.n_emitted", f"must be >= 0, got {scenario.n_emitted!r}"))
    if scenario.runs < 1:
        out.append(Violation("sampling.runs", f"must be >= 1, got {scenario.runs!r}"))
    if not (0 <= scenario.seed < 2**64):
        out.append(Violation("sampling.seed", f"must fit in 64 bits, got {scenario.seed!r}"))
    return out


def _require_valid(scenario: TwoSlitScenario) -> None:
    violations = validate_scenario(scenario)
    if violations:
        raise ScenarioError([(v.invariant, v.message) for v in violations])


def _pattern_raw(scenario: TwoSlitScenario) -> np.ndarray:
    p1 = np.asarray(scenario.envelope1, dtype=float)
    p2 = np.asarray(scenario.envelope2, dtype=float)
    theta = scenario.phase_table()
    raw = 0.5 * (p1 + p2 + 2.0 * np.sqrt(p1 * p2) * np.cos(theta))
    low = float(raw.min())
    if low < -1e-12:
        raise ScenarioError([("pattern", f"negative probability {low!r} in the pattern")])
    return np.maximum(raw, 0.0)  # clip float dust; the expression is a squared modulus


def pattern_normalization(scenario: TwoSlitScenario) -> float:
    """Grid sum of the raw interference pattern before renormalization.

    With the gauge used here the interference term need not cancel exactly on
    a finite grid; the deviation of this constant from 1 diagnoses grid
    truncation.
    """
    _require_valid(scenario)
    return float(_pattern_raw(scenario).sum())


def _pattern_array(scenario: TwoSlitScenario) -> np.ndarray:
    raw = _pattern_raw(scenario)
    total = float(raw.sum())
    if total <= 0.0:
        raise ScenarioError([("pattern", "interference pattern sums to zero")])
    return raw / total


def analytic_pattern(scenario: TwoSlitScenario) -> ContextualDistribution:
    """Exact pooled-context distribution implied by the scenario.

    Evaluates ``(1/2) * (p1 + p2 + 2*sqrt(p1*p2)*cos(theta))`` on every bin
    and renormalizes the grid sum to 1 (see :func:`pattern_normalization`).
    """
    _require_valid(scenario)
    pattern = _pattern_array(scenario)
    labels = scenario.grid.labels()
    return ContextualDistribution("S", dict(zip(labels, (float(p) for p in pattern))))


def _run_rng(scenario: TwoSlitScenario, context_index: int, run: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=scenario.seed, spawn_key=(context_index, run))
    return np.random.Generator(np.random.Philox(seed=seq))


def _simulate_counts(
    scenario: TwoSlitScenario, which: str, run: int, pattern: np.ndarray
) -> np.ndarray:
    rng = _run_rng(scenario, _CONTEXT_INDEX[which], run)
    if which == "S":
        pv = pattern
        detected = scenario.n_emitted
    else:
        env = scenario.envelope1 if which == "S1" else scenario.envelope2
        pv = np.asarray(env, dtype=float)
        pv = pv / pv.sum()
        detected = int(rng.binomial(scenario.n_emitted, BRANCH_ACCEPTANCE)) if scenario.n_emitted else 0
    return rng.multinomial(detected, pv)


def simulate_context(scenario: TwoSlitScenario, which: str, run: int = 0) -> EnsembleCounts:
    """Simulate one collection period for one context.

    Deterministic given ``(scenario.seed, which, run)``; the stream for each
    (context, run) pair is independent of all others.
    """
    if which not in CONTEXT_IDS:
        raise ValueError(f"context must be one of {CONTEXT_IDS}, got {which!r}")
    _require_valid(scenario)
    pattern = _pattern_array(scenario)
    counts = _simulate_counts(scenario, which, run, pattern)
    return EnsembleCounts(
        which,
        dict(zip(scenario.grid.labels(), (int(c) for c in counts))),
        scenario.n_emitted,
    )


@dataclass(frozen=True, slots=True)
class BinEstimate:
    """Empirical decomposition of one bin, with binomial standard errors.

    ``z`` measures ``|p_s - (c1*p_1 + c2*p_2)|`` in standard-error units.
    ``theta`` is the phase recovered from the bin's classification; it and
    the standard errors are None where undefined (degenerate or boundary
    bins, or zero-variance corners).
    """

    bin: str
    x: float | None
    p_s: float
    p_1: float
    p_2: float
    classical: float
    delta: float
    lam: float | None
    kind: Trigonometric | Hyperbolic | Boundary | Degenerate
    theta: float | None
    stderr_lambda: float | None
    stderr_theta: float | None
    z: float | None


@dataclass(frozen=True)
class ExperimentReport:
    """Everything estimated from the three ensembles of one experiment."""

    counts_s: EnsembleCounts
    counts_s1: EnsembleCounts
    counts_s2: EnsembleCounts
    coeffs: SplittingCoefficients
    coeff_deviation: float
    bins: tuple[BinEstimate, ...]
    violation_statistic: float
    classification_tol: float
    pattern_normalization: float | None = None


def decompose_empirical(
    space: OutcomeSpace,
    counts_s: EnsembleCounts,
    counts_s1: EnsembleCounts,
    counts_s2: EnsembleCounts,
    tol: float = 1e-9,
    positions: dict[str, float] | None = None,
) -> ExperimentReport:
    """Estimate the full interference decomposition from three histograms.

    Splitting coefficients come from the detection totals and are left
    unrenormalized. Standard errors are first-order binomial propagation:
    per-bin probabilities are treated as binomial proportions of their
    context's detected total, and the coefficient estimates as constants
    (their relative fluctuation is second order here).

    Raises:
        ZeroEnsemble: if any context detected nothing.
    """
    coeffs, deviation = estimate_splitting(counts_s1, counts_s2, counts_s)
    dist_s = empirical_distribution(counts_s)
    dist_s1 = empirical_distribution(counts_s1)
    dist_s2 = empirical_distribution(counts_s2)
    model = ContextualModel(space, dist_s, dist_s1, dist_s2, coeffs)
    decomposition = decompose(model, tol)

    n_s = counts_s.total_detected
    n_1 = counts_s1.total_detected
    n_2 = counts_s2.total_detected
    c1, c2 = coeffs.c1, coeffs.c2

    estimates: list[BinEstimate] = []
    max_z = 0.0
    for rec in decomposition.bins:
        label = rec.bin
        p_s = dist_s.probs[label]
        p_1 = dist_s1.probs[label]
        p_2 = dist_s2.probs[label]
        var_s = p_s * (1.0 - p_s) / n_s
        var_1 = p_1 * (1.0 - p_1) / n_1
        var_2 = p_2 * (1.0 - p_2) / n_2

        diff = p_s - rec.classical_part
        var_diff = var_s + c1 * c1 * var_1 + c2 * c2 * var_2
        z = abs(diff) / math.sqrt(var_diff) if var_diff > 0.0 else None
        if z is not None:
            max_z = max(max_z, z)

        stderr_lambda = None
        stderr_theta = None
        theta = None
        if rec.lam is not None:
            g = math.sqrt(c1 * p_1 * c2 * p_2)
            d_ps = 1.0 / (2.0 * g)
            d_p1 = -(c1 / (2.0 * g) + rec.lam / (2.0 * p_1))
            d_p2 = -(c2 / (2.0 * g) + rec.lam / (2.0 * p_2))
            var_lam = d_ps * d_ps * var_s + d_p1 * d_p1 * var_1 + d_p2 * d_p2 * var_2
            stderr_lambda = math.sqrt(var_lam) if var_lam > 0.0 else None
            if isinstance(rec.kind, Trigonometric):
                theta = rec.kind.theta
                slope = 1.0 - rec.lam * rec.lam
                if stderr_lambda is not None and slope > 0.0:
                    stderr_theta = stderr_lambda / math.sqrt(slope)
            elif isinstance(rec.kind, Hyperbolic):
                theta = rec.kind.theta
                slope = rec.lam * rec.lam - 1.0
                if stderr_lambda is not None and slope > 0.0:
                    stderr_theta = stderr_lambda / math.sqrt(slope)

        estimates.append(
            BinEstimate(
                bin=label,
                x=positions.get(label) if positions else None,
                p_s=p_s,
                p_1=p_1,
                p_2=p_2,
                classical=rec.classical_part,
                delta=rec.delta,
                lam=rec.lam,
                kind=rec.kind,
                theta=theta,
                stderr_lambda=stderr_lambda,
                stderr_theta=stderr_theta,
                z=z,
            )
        )
    return ExperimentReport(
        counts_s=counts_s,
        counts_s1=counts_s1,
        counts_s2=counts_s2,
        coeffs=coeffs,
        coeff_deviation=deviation,
        bins=tuple(estimates),
        violation_statistic=max_z,
        classification_tol=tol,
    )


def run_experiment(
    scenario: TwoSlitScenario, tol: float = 1e-9, workers: int = 1
) -> ExperimentReport:
    """Simulate all three contexts and estimate the decomposition.

    ``workers`` > 1 simulates the (context, run) pairs on a thread pool;
    because every pair has its own random stream and the per-context
    reduction is an integer sum, the report is identical for any worker
    count and any scheduling.

    Raises:
        ZeroEnsemble: if a context ends up with no detected systems
            (for example ``n_emitted = 0``).
    """
    _require_valid(scenario)
    pattern = _pattern_array(scenario)
    labels = scenario.grid.labels()

    tasks = [(which, run) for which in CONTEXT_IDS for run in range(scenario.runs)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(lambda t: _simulate_counts(scenario, t[0], t[1], pattern), tasks)
            )
    else:
        results = [_simulate_counts(scenario, which, run, pattern) for which, run in tasks]

    totals = {which: np.zeros(scenario.grid.bins, dtype=np.int64) for which in CONTEXT_IDS}
    for (which, _), counts in zip(tasks, results):
        totals[which] += counts

    emitted = scenario.n_emitted * scenario.runs
    ensembles = {
        which: EnsembleCounts(
            which, dict(zip(labels, (int(c) for c in totals[which]))), emitted
        )
        for which in CONTEXT_IDS
    }
    positions = dict(zip(labels, (float(x) for x in scenario.grid.midpoints())))
    report = decompose_empirical(
        scenario.grid.outcome_space(),
        ensembles["S"],
        ensembles["S1"],
        ensembles["S2"],
        tol=tol,
        positions=positions,
    )
    raw_total = float(_pattern_raw(scenario).sum())
    return dataclasses.replace(report, pattern_normalization=raw_total)


def alternative_condition_check(report: ExperimentReport, n_sigma: float) -> tuple[bool, float]:
    """Check the sharing of detections between the branch contexts.

    Passes when ``|N1 + N2 - N| <= n_sigma * sqrt(N)`` where ``N`` is the
    pooled context's detected total. Returns ``(passed, deviation)`` with the
    deviation already normalized by ``sqrt(N)``.

    Raises:
        ZeroEnsemble: if the pooled context detected nothing.
    """
    n = report.counts_s.total_detected
    if n == 0:
        raise ZeroEnsemble("pooled context has zero detected systems")
    n1 = report.counts_s1.total_detected
    n2 = report.counts_s2.total_detected
    deviation = abs(n1 + n2 - n) / math.sqrt(n)
    return deviation <= n_sigma, deviation
