"""Domain types and validation for contextual statistical models.

A *context* is a complete arrangement of experimental conditions under which
an ensemble of systems is prepared and measured. The central record here is
the :class:`ContextualModel`: one outcome space, the outcome distribution
measured under a pooled context ``S``, the distributions measured under two
restricted contexts ``S1`` and ``S2``, and the splitting coefficients that
describe how detected systems are shared between the two restricted
arrangements.

Probabilities are stored per bin over a finite, declared outcome space; an
"event" always means a single bin. Splitting coefficients for an exact model
must sum to 1; coefficients estimated from counts are flagged empirical and
carry their deviation from 1 instead of being renormalized, so a violation of
the sharing assumption stays observable.

All values are immutable after construction and every operation is a pure
function, so everything here is safe to use from concurrent execution
streams.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ZeroEnsemble

#: Absolute tolerance on the sum of an exact distribution. Chosen to absorb
#: double-precision accumulation error over up to ~1e6 bins.
DISTRIBUTION_SUM_TOL = 1e-9

#: Absolute tolerance on ``c1 + c2 - 1`` for exact splitting coefficients.
EXACT_COEFF_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class Violation:
    """One invariant violation, reported as data rather than an exception."""

    invariant: str
    message: str
    value: object = None
    bin: str | None = None

    def __str__(self) -> str:
        where = f" [bin {self.bin}]" if self.bin is not None else ""
        return f"{self.invariant}{where}: {self.message}"


@dataclass(frozen=True, slots=True)
class OutcomeSpace:
    """Ordered, finite collection of outcome bin labels.

    For position measurements the labels are the rendered midpoints of a
    uniform grid; for abstract setups they are opaque identifiers.
    """

    bins: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bins", tuple(str(b) for b in self.bins))

    def __len__(self) -> int:
        return len(self.bins)


@dataclass(frozen=True)
class ContextualDistribution:
    """Outcome distribution measured under one specific context."""

    context_id: str
    probs: dict[str, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", dict(self.probs))


@dataclass(frozen=True, slots=True)
class SplittingCoefficients:
    """Sharing ratios for the transition from a pooled context to two branches.

    These are proportions of detected systems, not conditional probabilities:
    the branch contexts are generally not events within the pooled context's
    probability space. ``empirical`` marks coefficients estimated from counts;
    such estimates are deliberately not renormalized.
    """

    c1: float
    c2: float
    empirical: bool = False

    @property
    def deviation(self) -> float:
        """Absolute deviation of ``c1 + c2`` from the exact-sharing value 1."""
        return abs(self.c1 + self.c2 - 1.0)


@dataclass(frozen=True)
class ContextualModel:
    """The full context-transition triple ``S -> S1`` and ``S -> S2``."""

    space: OutcomeSpace
    dist_s: ContextualDistribution
    dist_s1: ContextualDistribution
    dist_s2: ContextualDistribution
    coeffs: SplittingCoefficients


@dataclass(frozen=True)
class EnsembleCounts:
    """Detection histogram for one context over one or more collection periods.

    ``total_emitted`` is the number of systems the source produced while the
    histogram was collected; systems lost in transit appear in the difference
    ``total_emitted - total_detected``.
    """

    context_id: str
    counts: dict[str, int]
    total_emitted: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", dict(self.counts))

    @property
    def total_detected(self) -> int:
        return sum(self.counts.values())


def validate_space(space: OutcomeSpace) -> list[Violation]:
    out: list[Violation] = []
    if len(space.bins) < 1:
        out.append(Violation("space.nonempty", "outcome space has no bins", value=space.bins))
    seen: set[str] = set()
    for label in space.bins:
        if label in seen:
            out.append(
                Violation("space.unique_labels", f"duplicate bin label {label!r}", value=label, bin=label)
            )
        seen.add(label)
    return out


def validate_distribution(dist: ContextualDistribution, space: OutcomeSpace) -> list[Violation]:
    out: list[Violation] = []
    declared = set(space.bins)
    keys = set(dist.probs)
    for missing in sorted(declared - keys):
        out.append(
            Violation(
                "distribution.covers_space",
                f"context {dist.context_id!r} has no probability for bin {missing!r}",
                bin=missing,
            )
        )
    for extra in sorted(keys - declared):
        out.append(
            Violation(
                "distribution.covers_space",
                f"context {dist.context_id!r} assigns probability to undeclared bin {extra!r}",
                bin=extra,
            )
        )
    for label, p in dist.probs.items():
        if not (0.0 <= p <= 1.0):
            out.append(
                Violation(
                    "distribution.range",
                    f"context {dist.context_id!r} probability {p!r} is outside [0, 1]",
                    value=p,
                    bin=label,
                )
            )
    total = sum(dist.probs[label] for label in space.bins if label in dist.probs)
    if abs(total - 1.0) > DISTRIBUTION_SUM_TOL:
        out.append(
            Violation(
                "distribution.normalized",
                f"context {dist.context_id!r} probabilities sum to {total!r}, "
                f"not 1 within {DISTRIBUTION_SUM_TOL}",
                value=total,
            )
        )
    return out


def validate_coefficients(coeffs: SplittingCoefficients) -> list[Violation]:
    out: list[Violation] = []
    if coeffs.c1 < 0.0:
        out.append(Violation("coefficients.nonnegative", f"c1 = {coeffs.c1!r} is negative", value=coeffs.c1))
    if coeffs.c2 < 0.0:
        out.append(Violation("coefficients.nonnegative", f"c2 = {coeffs.c2!r} is negative", value=coeffs.c2))
    if not coeffs.empirical and coeffs.deviation > EXACT_COEFF_TOL:
        out.append(
            Violation(
                "coefficients.alternative_condition",
                f"c1 + c2 = {coeffs.c1 + coeffs.c2!r} violates the statistical alternative "
                f"condition (must be 1 within {EXACT_COEFF_TOL} for exact models)",
                value=coeffs.c1 + coeffs.c2,
            )
        )
    return out


def validate_counts(counts: EnsembleCounts) -> list[Violation]:
    out: list[Violation] = []
    for label, n in counts.counts.items():
        if n < 0:
            out.append(
                Violation(
                    "counts.nonnegative",
                    f"context {counts.context_id!r} count {n!r} is negative",
                    value=n,
                    bin=label,
                )
            )
    if counts.total_emitted < 0:
        out.append(
            Violation("counts.nonnegative", f"total_emitted = {counts.total_emitted!r} is negative",
                      value=counts.total_emitted)
        )
    if counts.total_detected > counts.total_emitted:
        out.append(
            Violation(
                "counts.detected_within_emitted",
                f"context {counts.context_id!r} detected {counts.total_detected} systems "
                f"but only {counts.total_emitted} were emitted",
                value=counts.total_detected,
            )
        )
    return out


def validate_model(model: ContextualModel) -> list[Violation]:
    """Check every invariant of a contextual model.

    Returns an empty list iff the model is valid. Violations are data: an
    invalid model can be constructed and inspected, it just cannot be fed to
    the decomposition operations.
    """
    out = validate_space(model.space)
    for dist in (model.dist_s, model.dist_s1, model.dist_s2):
        out.extend(validate_distribution(dist, model.space))
    out.extend(validate_coefficients(model.coeffs))
    return out


def estimate_splitting(
    counts_s1: EnsembleCounts,
    counts_s2: EnsembleCounts,
    counts_s: EnsembleCounts,
) -> tuple[SplittingCoefficients, float]:
    """Estimate splitting coefficients from detection totals.

    The estimate is ``(N1 / N, N2 / N)`` where ``N`` and ``Nj`` are the
    detected totals under the pooled and branch contexts. The returned
    deviation is ``|N1/N + N2/N - 1|``; it is surfaced instead of being
    normalized away so callers can check the sharing assumption statistically.

    Raises:
        ZeroEnsemble: if the pooled context detected nothing.
    """
    n = counts_s.total_detected
    if n == 0:
        raise ZeroEnsemble("pooled context has zero detected systems")
    c1 = counts_s1.total_detected / n
    c2 = counts_s2.total_detected / n
    coeffs = SplittingCoefficients(c1, c2, empirical=True)
    return coeffs, coeffs.deviation


def empirical_distribution(counts: EnsembleCounts) -> ContextualDistribution:
    """Frequency estimate of a context's outcome distribution.

    Raises:
        ZeroEnsemble: if all counts are zero.
    """
    total = counts.total_detected
    if total == 0:
        raise ZeroEnsemble(f"context {counts.context_id!r} has zero detected systems")
    probs = {label: n / total for label, n in counts.counts.items()}
    return ContextualDistribution(counts.context_id, probs)
