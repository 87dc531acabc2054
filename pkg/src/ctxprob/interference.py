"""The contextual probability calculus.

When data from three contexts are combined, the pooled distribution need not
equal the coefficient-weighted mixture of the branch distributions. The gap
is quantified per outcome bin by two numbers:

* the perturbation ``delta = c1*(pS - p1) + c2*(pS - p2)``, the weighted
  deviation of the pooled distribution from the two branch distributions, and
* the normalized coefficient ``lambda = delta / (2*sqrt(c1*p1*c2*p2))``,
  which rescales the perturbation by twice the geometric mean of the
  weighted branch probabilities.

Because ``c1 + c2 = 1``, the pooled probability always decomposes as

    pS = c1*p1 + c2*p2 + 2*sqrt(c1*p1*c2*p2) * lambda

and the magnitude of ``lambda`` classifies the context transition:
``|lambda| < 1`` is trigonometric interference (``lambda = cos(theta)``),
``|lambda| > 1`` is hyperbolic interference (``lambda = +-cosh(theta)``),
and ``|lambda| = 1`` sits on the boundary between the two regimes. The
forward transforms invert this: given branch probabilities and a phase they
produce the pooled probability.

In the denominator of ``lambda`` both factors are weighted by the transition
coefficient of their own branch, ``c1*p1`` and ``c2*p2``; this is the reading
consistent with the decomposition identity above.

Everything here is a pure function over immutable inputs and may be called
concurrently without restriction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ContextualModel, OutcomeSpace, SplittingCoefficients, validate_model
from .errors import ConsistencyError, DegenerateBranch, OutOfRange

#: Default half-width of the band around ``|lambda| = 1`` classified Boundary.
DEFAULT_CLASSIFY_TOL = 1e-9

#: Absolute tolerance for the per-bin reconstruction identity on exact models.
RECONSTRUCTION_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class Trigonometric:
    """Ordinary cos-type interference with phase in [0, pi]."""

    theta: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError(f"trigonometric phase {self.theta!r} outside [0, pi]")


@dataclass(frozen=True, slots=True)
class Hyperbolic:
    """cosh-type interference with phase in [0, inf) and a sign.

    Transitions this large have no counterpart in standard cos-type
    interference; the sign is taken from the sign of lambda.
    """

    theta: float
    sign: int

    def __post_init__(self) -> None:
        if self.theta < 0.0:
            raise ValueError(f"hyperbolic phase {self.theta!r} is negative")
        if self.sign not in (-1, 1):
            raise ValueError(f"sign must be -1 or +1, got {self.sign!r}")


@dataclass(frozen=True, slots=True)
class Boundary:
    """``|lambda| = 1`` within tolerance: both regimes meet, no phase assigned."""


@dataclass(frozen=True, slots=True)
class Degenerate:
    """Marker for bins where lambda is undefined (some ``c_j * p_j`` is zero)."""


InterferenceKind = Trigonometric | Hyperbolic | Boundary
BinKind = Trigonometric | Hyperbolic | Boundary | Degenerate


def kind_label(kind: BinKind) -> str:
    return {
        Trigonometric: "trigonometric",
        Hyperbolic: "hyperbolic",
        Boundary: "boundary",
        Degenerate: "degenerate",
    }[type(kind)]


@dataclass(frozen=True, slots=True)
class BinDecomposition:
    """Interference decomposition of the pooled probability at one bin.

    ``classical_part`` is the mixture term ``c1*p1 + c2*p2``; ``lam`` is None
    exactly when ``kind`` is Degenerate.
    """

    bin: str
    classical_part: float
    delta: float
    lam: float | None
    kind: BinKind


@dataclass(frozen=True)
class InterferenceDecomposition:
    """Per-bin decomposition of a contextual model."""

    space: OutcomeSpace
    coeffs: SplittingCoefficients
    tol: float
    bins: tuple[BinDecomposition, ...]

    def by_bin(self) -> dict[str, BinDecomposition]:
        return {rec.bin: rec for rec in self.bins}


def total_probability(coeffs: SplittingCoefficients, p1: float, p2: float) -> float:
    """Mixture of the branch probabilities: ``c1*p1 + c2*p2``.

    This is the value the pooled probability would take if combining the
    branch data introduced no perturbation.
    """
    return coeffs.c1 * p1 + coeffs.c2 * p2


def perturbation_delta(coeffs: SplittingCoefficients, p_s: float, p1: float, p2: float) -> float:
    """Weighted deviation of the pooled probability from the branch ones.

    Computed from the explicit definition
    ``c1*(pS - p1) + c2*(pS - p2)``, never as ``pS - total_probability``;
    when the coefficients sum to 1 the two forms agree, and downstream code
    asserts that agreement as a runtime consistency check.
    """
    return coeffs.c1 * (p_s - p1) + coeffs.c2 * (p_s - p2)


def lambda_coefficient(coeffs: SplittingCoefficients, p_s: float, p1: float, p2: float) -> float:
    """Normalized coefficient of the context transition at one bin.

    ``delta`` divided by twice the geometric mean of the weighted branch
    probabilities. Values of magnitude up to 1 are realizable as ``cos`` of a
    phase, larger magnitudes only as ``+-cosh``.

    Raises:
        DegenerateBranch: if ``c1*p1`` or ``c2*p2`` is zero, in which case
            the normalization is undefined and the bin must be reported as
            degenerate rather than classified.
    """
    w1 = coeffs.c1 * p1
    w2 = coeffs.c2 * p2
    if w1 <= 0.0 or w2 <= 0.0:
        raise DegenerateBranch(
            f"weighted branch probabilities c1*p1 = {w1!r}, c2*p2 = {w2!r}; "
            "lambda is undefined when either is zero"
        )
    delta = perturbation_delta(coeffs, p_s, p1, p2)
    return delta / (2.0 * math.sqrt(w1 * w2))


def classify(lam: float, tol: float = DEFAULT_CLASSIFY_TOL) -> InterferenceKind:
    """Classify a normalized transition coefficient and recover its phase.

    ``|lam| < 1 - tol`` is trigonometric with phase ``acos(lam)``;
    ``|lam| > 1 + tol`` is hyperbolic with phase ``acosh(|lam|)`` and the
    sign of ``lam``; anything within the band is Boundary. The band exists
    because magnitude exactly 1 belongs to both regimes, so no arbitrary
    branch is picked.
    """
    if tol <= 0.0:
        raise ValueError(f"classification tolerance must be positive, got {tol!r}")
    mag = abs(lam)
    if mag < 1.0 - tol:
        return Trigonometric(math.acos(lam))
    if mag > 1.0 + tol:
        return Hyperbolic(math.acosh(mag), 1 if lam > 0 else -1)
    return Boundary()


def forward_trig(coeffs: SplittingCoefficients, p1: float, p2: float, theta: float) -> float:
    """Pooled probability for a trigonometric transition with phase ``theta``.

    Returns ``c1*p1 + c2*p2 + 2*sqrt(c1*p1*c2*p2)*cos(theta)``. The result
    is a valid probability whenever ``sqrt(c1*p1) + sqrt(c2*p2) <= 1`` (for
    example whenever ``p1 + p2 <= 1``); outside that region the formula can
    exceed 1 and the caller is responsible for the interpretation. No
    clamping is applied.
    """
    cross = 2.0 * math.sqrt(coeffs.c1 * p1 * coeffs.c2 * p2)
    return coeffs.c1 * p1 + coeffs.c2 * p2 + cross * math.cos(theta)


def forward_hyp(
    coeffs: SplittingCoefficients, p1: float, p2: float, theta: float, sign: int
) -> float:
    """Pooled probability for a hyperbolic transition with phase ``theta``.

    Returns ``c1*p1 + c2*p2 + sign * 2*sqrt(c1*p1*c2*p2)*cosh(theta)``.
    Hyperbolic transforms are probabilistically valid only for restricted
    inputs, so the result is checked.

    Raises:
        OutOfRange: if the value falls outside [0, 1], meaning the requested
            hyperbolic transition is not realizable as a probability.
    """
    if sign not in (-1, 1):
        raise ValueError(f"sign must be -1 or +1, got {sign!r}")
    cross = 2.0 * math.sqrt(coeffs.c1 * p1 * coeffs.c2 * p2)
    value = coeffs.c1 * p1 + coeffs.c2 * p2 + sign * cross * math.cosh(theta)
    if not (0.0 <= value <= 1.0):
        raise OutOfRange(value, f"hyperbolic transform gives {value!r}, outside [0, 1]")
    return value


def _check_delta_forms(
    coeffs: SplittingCoefficients, p_s: float, p1: float, p2: float, delta: float
) -> None:
    # delta from its definition must agree with pS - total_probability up to
    # the (recorded) deviation of c1 + c2 from 1. A failure here means the
    # inputs bypassed validation.
    residual = p_s - total_probability(coeffs, p1, p2)
    slack = RECONSTRUCTION_TOL + coeffs.deviation * abs(p_s)
    if abs(delta - residual) > slack:
        raise ConsistencyError(
            f"perturbation forms disagree at pS={p_s!r}, p1={p1!r}, p2={p2!r}: "
            f"definition gives {delta!r}, residual form gives {residual!r}"
        )


def decompose(model: ContextualModel, tol: float = DEFAULT_CLASSIFY_TOL) -> InterferenceDecomposition:
    """Per-bin interference decomposition of a validated contextual model.

    Each bin yields the classical mixture part, the perturbation, the
    normalized coefficient and its classification. Bins where a weighted
    branch probability vanishes are marked Degenerate instead of aborting
    the whole decomposition; real envelopes vanish in their tails and
    whole-screen analysis must survive that.

    For models with exact coefficients the reconstruction identity
    ``classical_part + 2*sqrt(c1*p1*c2*p2)*lambda = pS`` holds within 1e-12
    on every non-degenerate bin; empirical coefficients widen the tolerance
    by ``|c1 + c2 - 1| * pS``.

    Raises:
        ValueError: if the model fails validation.
    """
    violations = validate_model(model)
    if violations:
        raise ValueError(
            "cannot decompose an invalid model: " + "; ".join(str(v) for v in violations)
        )
    coeffs = model.coeffs
    records: list[BinDecomposition] = []
    for label in model.space.bins:
        p_s = model.dist_s.probs[label]
        p1 = model.dist_s1.probs[label]
        p2 = model.dist_s2.probs[label]
        classical = total_probability(coeffs, p1, p2)
        delta = perturbation_delta(coeffs, p_s, p1, p2)
        _check_delta_forms(coeffs, p_s, p1, p2, delta)
        w1 = coeffs.c1 * p1
        w2 = coeffs.c2 * p2
        if w1 <= 0.0 or w2 <= 0.0:
            records.append(BinDecomposition(label, classical, delta, None, Degenerate()))
            continue
        lam = delta / (2.0 * math.sqrt(w1 * w2))
        records.append(BinDecomposition(label, classical, delta, lam, classify(lam, tol)))
    return InterferenceDecomposition(model.space, coeffs, tol, tuple(records))
