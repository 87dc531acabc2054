import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ctxprob import (
    GridSpec,
    NormalizationError,
    OutOfRange,
    SplitComplex,
    SplittingCoefficients,
    cos_identity,
    forward_hyp,
    forward_trig,
    gaussian_envelope,
    split_modulus,
    synthesize_hyperbolic,
    synthesize_two_slit_wave,
    synthesize_wave,
    uniform_envelope,
)

# Frozen from 50-digit arithmetic on the exact double inputs.
COS_IDENTITY_AT_06_03_11 = 0.6132946037132078
SPLIT_MODULUS_AT_05_02_1 = 0.5986161269630488

HALF = SplittingCoefficients(0.5, 0.5)


class TestCosIdentity:
    def test_collinear(self):
        assert cos_identity(1.0, 1.0, 0.0) == (4.0, 4.0)

    def test_cancellation(self):
        lhs, rhs = cos_identity(1.0, 1.0, math.pi)
        assert lhs == pytest.approx(0.0, abs=1e-15)
        assert rhs == pytest.approx(0.0, abs=1e-30)

    def test_generic_value(self):
        lhs, rhs = cos_identity(0.6, 0.3, 1.1)
        assert lhs == pytest.approx(COS_IDENTITY_AT_06_03_11, abs=1e-15)
        assert rhs == pytest.approx(COS_IDENTITY_AT_06_03_11, abs=1e-15)

    @given(a=st.floats(0, 1), b=st.floats(0, 1), theta=st.floats(0, 2 * math.pi))
    def test_sides_agree(self, a, b, theta):
        lhs, rhs = cos_identity(a, b, theta)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, lhs)

    @given(a=st.floats(0, 1), b=st.floats(0, 1), theta=st.floats(0, math.pi))
    def test_parallelogram_law(self, a, b, theta):
        # Diagonal of the parallelogram via explicit planar vectors.
        u = np.array([a, 0.0])
        v = np.array([b * math.cos(theta), b * math.sin(theta)])
        diagonal_sq = float(np.dot(u + v, u + v))
        lhs, _ = cos_identity(a, b, theta)
        assert diagonal_sq == pytest.approx(lhs, abs=1e-12)


class TestSynthesizeWave:
    def test_constructive_limit(self):
        amp = synthesize_wave(HALF, 0.5, 0.5, 0.0)
        assert amp == pytest.approx(1.0 + 0.0j, abs=1e-15)
        assert abs(amp) ** 2 == pytest.approx(1.0, abs=1e-15)

    def test_destructive_limit(self):
        amp = synthesize_wave(HALF, 0.5, 0.5, math.pi)
        assert abs(amp) ** 2 == pytest.approx(0.0, abs=1e-30)

    def test_born_value_matches_forward_transform(self):
        amp = synthesize_wave(HALF, 0.5, 0.5, math.acos(0.8))
        assert abs(amp) ** 2 == pytest.approx(0.9, abs=1e-12)

    @given(
        p1=st.floats(0.0, 1.0),
        p2=st.floats(0.0, 1.0),
        c1=st.floats(0.05, 0.95),
        theta=st.floats(0.0, math.pi),
    )
    def test_born_rule_equivalence(self, p1, p2, c1, theta):
        c = SplittingCoefficients(c1, 1.0 - c1)
        amp = synthesize_wave(c, p1, p2, theta)
        assert abs(amp) ** 2 == pytest.approx(forward_trig(c, p1, p2, theta), abs=1e-12)

    @given(theta=st.floats(0.0, math.pi), theta2=st.floats(-10.0, 10.0))
    def test_gauge_choice_changes_only_global_phase(self, theta, theta2):
        base = synthesize_wave(HALF, 0.3, 0.6, theta)
        shifted = synthesize_wave(HALF, 0.3, 0.6, theta, theta2=theta2)
        assert abs(shifted) ** 2 == pytest.approx(abs(base) ** 2, abs=1e-12)
        assert shifted == pytest.approx(base * cmath.exp(1j * theta2), abs=1e-12)


class TestSplitComplex:
    def test_real_unit(self):
        assert split_modulus(SplitComplex(1.0, 0.0)) == 1.0

    def test_null_cone(self):
        assert split_modulus(SplitComplex(1.0, 1.0)) == 0.0

    def test_generic_value(self):
        z = SplitComplex(0.5, 0.0) + 0.2 * SplitComplex.hyperbolic_exp(1.0)
        assert split_modulus(z) == pytest.approx(SPLIT_MODULUS_AT_05_02_1, abs=1e-13)

    def test_multiplication_is_hyperbolic(self):
        # j * j = +1
        j = SplitComplex(0.0, 1.0)
        assert j * j == SplitComplex(1.0, 0.0)
        # unit elements multiply by adding phases
        a = SplitComplex.hyperbolic_exp(0.3)
        b = SplitComplex.hyperbolic_exp(0.9)
        ab = a * b
        expected = SplitComplex.hyperbolic_exp(1.2)
        assert ab.x == pytest.approx(expected.x, rel=1e-12)
        assert ab.y == pytest.approx(expected.y, rel=1e-12)

    def test_additive_group_operations(self):
        z = SplitComplex(2.0, 1.0)
        w = SplitComplex(0.5, -0.25)
        assert z - w == SplitComplex(1.5, 1.25)
        assert -z == SplitComplex(-2.0, -1.0)
        assert (z - w) + w == z
        assert 2.0 * w == SplitComplex(1.0, -0.5)

    def test_conjugation_negates_hyperbolic_part(self):
        z = SplitComplex(2.0, -3.0)
        assert z.conjugate() == SplitComplex(2.0, 3.0)
        assert split_modulus(z.conjugate()) == split_modulus(z)

    @given(a=st.floats(0, 1), b=st.floats(0, 1), theta=st.floats(0, 5))
    def test_cosh_identity(self, a, b, theta):
        z = SplitComplex(a, 0.0) + b * SplitComplex.hyperbolic_exp(theta)
        expected = a * a + b * b + 2 * a * b * math.cosh(theta)
        # Error scale: the components reach a + b*cosh(theta) even when the
        # modulus itself is ~1, and their rounding enters squared.
        scale = max(1.0, expected, (a + b * math.cosh(theta)) ** 2)
        assert abs(split_modulus(z) - expected) <= 1e-12 * scale


class TestSynthesizeHyperbolic:
    def test_zero_phase_degenerates_to_real_arithmetic(self):
        c = SplittingCoefficients(0.3, 0.7)
        z = synthesize_hyperbolic(c, 0.2, 0.1, 0.0, 1)
        root = math.sqrt(c.c1 * 0.2) + math.sqrt(c.c2 * 0.1)
        assert z.y == 0.0
        assert split_modulus(z) == pytest.approx(root * root, abs=1e-15)

    def test_matches_forward_transform(self):
        theta = math.acosh(8.9)
        z = synthesize_hyperbolic(HALF, 0.1, 0.1, theta, 1)
        assert split_modulus(z) == pytest.approx(0.99, abs=1e-12)

    def test_negative_sign_contract(self):
        z = synthesize_hyperbolic(HALF, 0.8, 0.2, 0.1, -1)
        expected = forward_hyp(HALF, 0.8, 0.2, 0.1, -1)
        assert split_modulus(z) == pytest.approx(expected, abs=1e-12)

    def test_out_of_range_propagates(self):
        with pytest.raises(OutOfRange):
            synthesize_hyperbolic(HALF, 0.5, 0.5, 1.0, 1)

    @given(
        p1=st.floats(0.01, 0.15),
        p2=st.floats(0.01, 0.15),
        theta=st.floats(0.0, 2.0),
        sign=st.sampled_from([-1, 1]),
    )
    def test_modulus_contract_over_valid_domain(self, p1, p2, theta, sign):
        try:
            expected = forward_hyp(HALF, p1, p2, theta, sign)
        except OutOfRange:
            return
        z = synthesize_hyperbolic(HALF, p1, p2, theta, sign)
        assert split_modulus(z) == pytest.approx(expected, abs=1e-12)


class TestTwoSlitWave:
    def test_quarter_phase_gives_envelope_back(self):
        grid = GridSpec(32, -1.0, 1.0)
        env = uniform_envelope(grid)
        space = grid.outcome_space()
        wave = synthesize_two_slit_wave(space, env, env, [math.pi / 2] * 32)
        born = wave.born_probabilities()
        for label, p in zip(space.bins, env):
            assert born[label] == pytest.approx(p, abs=1e-15)

    def test_fringe_minima_sit_at_odd_multiples_of_pi(self):
        grid = GridSpec(512, -7.0, 7.0)
        env = gaussian_envelope(grid, 0.0, 1.0)
        x = grid.midpoints()
        k = 9.7
        theta = k * x
        space = grid.outcome_space()
        wave = synthesize_two_slit_wave(space, env, env, theta)
        born = np.array([wave.born_probabilities()[b] for b in space.bins])
        envelope = np.asarray(env)
        # Normalized fringe factor, 0 at phase pi (mod 2 pi), 2 at phase 0.
        fringe = born / envelope
        for m in (-3, -1, 1, 3):
            node_x = m * math.pi / k
            i = int(np.argmin(np.abs(x - node_x)))
            assert fringe[i] < 0.02
            assert fringe[i] <= fringe[i - 1] and fringe[i] <= fringe[i + 1]

    def test_free_wave_phases_match_two_plane_waves(self):
        grid = GridSpec(256, -7.0, 7.0)
        env = gaussian_envelope(grid, 0.0, 1.0)
        x = grid.midpoints()
        mom1, mom2, h = 6.2, -3.5, 1.0
        theta = (mom1 - mom2) * x / h
        space = grid.outcome_space()
        wave = synthesize_two_slit_wave(space, env, env, theta, h=h)
        # Same superposition built from per-branch plane-wave phases.
        inv = 1.0 / math.sqrt(2.0)
        for i, label in enumerate(space.bins):
            plane = inv * (
                math.sqrt(env[i]) * cmath.exp(1j * mom1 * x[i] / h)
                + math.sqrt(env[i]) * cmath.exp(1j * mom2 * x[i] / h)
            )
            assert abs(plane) ** 2 == pytest.approx(
                abs(wave.amplitudes[label]) ** 2, abs=1e-12
            )

    def test_normalization_error_when_interference_does_not_cancel(self):
        grid = GridSpec(64, -4.0, 4.0)
        env = gaussian_envelope(grid, 0.0, 1.0)
        theta = 0.5 * grid.midpoints()  # slow phase: cosine term keeps a large sum
        with pytest.raises(NormalizationError):
            synthesize_two_slit_wave(grid.outcome_space(), env, env, theta)

    def test_global_phase_invariance(self):
        grid = GridSpec(16, -1.0, 1.0)
        env = uniform_envelope(grid)
        space = grid.outcome_space()
        wave = synthesize_two_slit_wave(space, env, env, [math.pi / 2] * 16)
        for alpha in (0.1, 1.7, -2.9):
            rotated = wave.with_global_phase(alpha)
            base = wave.born_probabilities()
            moved = rotated.born_probabilities()
            for label in space.bins:
                assert moved[label] == pytest.approx(base[label], abs=1e-12)

    def test_phase_metadata_records_gauge_and_scaling(self):
        grid = GridSpec(8, 0.0, 1.0)
        env = uniform_envelope(grid)
        theta = [math.pi / 2] * 8
        wave = synthesize_two_slit_wave(grid.outcome_space(), env, env, theta, h=2.0)
        assert wave.theta2 == (0.0,) * 8
        assert wave.theta1 == tuple(theta)
        assert wave.scaling == 2.0
        assert wave.xi1() == tuple(t / 2.0 for t in theta)
        assert wave.xi2() == (0.0,) * 8

    def test_length_mismatch_rejected(self):
        grid = GridSpec(8, 0.0, 1.0)
        env = uniform_envelope(grid)
        with pytest.raises(ValueError, match="per-bin"):
            synthesize_two_slit_wave(grid.outcome_space(), env, env, [0.0] * 7)

    def test_wave_invariants(self):
        grid = GridSpec(256, -7.0, 7.0)
        env = gaussian_envelope(grid, 0.0, 1.0)
        theta = 9.7 * grid.midpoints()
        wave = synthesize_two_slit_wave(grid.outcome_space(), env, env, theta)
        born = wave.born_probabilities()
        assert all(0.0 <= p <= 1.0 for p in born.values())
        assert wave.normalization_defect() <= 1e-9
