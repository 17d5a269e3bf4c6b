from fractions import Fraction

import numpy as np
import pytest

from tangentkit.ekdl import (
    FourierLoopElement,
    QuotientAlgebraSpec,
    center_dimension,
    dl_quotient,
    ek_cocycle,
    ek_cocycle_oracle,
    ek_extension_check,
    extended_jacobi_residual,
    random_loop,
)
from tangentkit.lattice import QuadraticRational
from tangentkit.liegroup import LieAlgebraData


@pytest.fixture(scope="module")
def rng():
    return np.random.default_rng(17)


class TestLoopElements:
    def test_reality_constraint_enforced(self):
        with pytest.raises(ValueError):
            FourierLoopElement({1: [1.0, 0.0, 0.0]})  # c_{-1} missing

    def test_from_positive_builds_real_loops(self, rng):
        f = random_loop(rng, 3)
        for t in (0.0, 0.17, 0.5, 0.9):
            # value_at already returns the real part; check the imaginary
            # tail actually vanishes.
            z = sum(c * np.exp(2j * np.pi * n * t)
                    for n, c in f.coeffs.items())
            assert np.max(np.abs(z.imag)) < 1e-12

    def test_degree_and_zero_pruning(self):
        f = FourierLoopElement({0: [1.0, 0.0, 0.0], 2: [0.0, 0.0, 0.0]})
        assert f.degree == 0
        assert 2 not in f.coeffs

    def test_bracket_degree_bound_and_pointwise(self, rng):
        f, g = random_loop(rng, 2), random_loop(rng, 3)
        b = f.bracket(g)
        assert b.degree <= f.degree + g.degree
        for t in (0.1, 0.35, 0.72):
            want = np.cross(f.value_at(t), g.value_at(t))
            assert np.max(np.abs(b.value_at(t) - want)) < 1e-12

    def test_bracket_antisymmetric(self, rng):
        f, g = random_loop(rng, 2), random_loop(rng, 2)
        s = f.bracket(g) + g.bracket(f)
        assert s.norm() < 1e-12

    def test_derivative_matches_difference_quotient(self, rng):
        f = random_loop(rng, 2)
        h = 1e-6
        got = f.derivative_at(0.3)
        want = (f.value_at(0.3 + h) - f.value_at(0.3 - h)) / (2 * h)
        assert np.max(np.abs(got - want)) < 1e-6


class TestCocycle:
    def test_antisymmetry(self, rng):
        for _ in range(20):
            f, g = random_loop(rng, 3), random_loop(rng, 3)
            assert abs(ek_cocycle(f, g) + ek_cocycle(g, f)) <= 1e-10

    def test_closed_form_matches_quadrature(self, rng):
        for _ in range(10):
            f, g = random_loop(rng, 3), random_loop(rng, 3)
            assert abs(ek_cocycle(f, g) - ek_cocycle_oracle(f, g)) <= 1e-9

    def test_cocycle_condition(self, rng):
        for _ in range(20):
            f, g, h = (random_loop(rng, 2) for _ in range(3))
            resid = (ek_cocycle(f.bracket(g), h)
                     + ek_cocycle(g.bracket(h), f)
                     + ek_cocycle(h.bracket(f), g))
            assert abs(resid) <= 1e-10

    def test_constants_pair_to_zero(self, rng):
        c = FourierLoopElement({0: rng.standard_normal(3)})
        f = random_loop(rng, 3)
        assert ek_cocycle(c, f) == 0.0
        assert ek_cocycle(f, c) == 0.0

    def test_known_value(self):
        # f = (cos 2pi t) e1, g = (sin 2pi t) e2 (not bracket-paired, but
        # their cocycle is computable by hand: integral cos^2 = 1/2 wall).
        f = FourierLoopElement.from_positive({1: [0.5, 0.0, 0.0]})
        g = FourierLoopElement.from_positive({1: [0.0, -0.5j, 0.0]})
        # trace pairing is diagonal, so distinct su(2) slots give zero.
        assert ek_cocycle(f, g) == 0.0
        # same slot: integral of cos * d/dt sin = pi.
        g2 = FourierLoopElement.from_positive({1: [-0.5j, 0.0, 0.0]})
        assert abs(ek_cocycle(f, g2) - (-0.5) * np.pi) <= 1e-12
        assert abs(ek_cocycle(f, g2) - ek_cocycle_oracle(f, g2)) <= 1e-12

    def test_extended_jacobi(self, rng):
        assert ek_extension_check(2, 100, rng) <= 1e-9

    def test_extended_jacobi_single_triple(self, rng):
        f, g, h = (random_loop(rng, 2) for _ in range(3))
        assert extended_jacobi_residual(f, g, h) <= 1e-9

    def test_degree_validated(self):
        with pytest.raises(ValueError):
            ek_extension_check(-1, 10)


class TestQuotient:
    def test_n1_collapses_to_a_line(self):
        q, spec = dl_quotient(1)
        assert q.dim == 1
        assert np.max(np.abs(q.structure)) == 0.0
        assert center_dimension(q) == 1

    def test_n2_dimension_center_jacobi(self):
        q, spec = dl_quotient(2)
        assert spec.parent.dim == 8
        assert q.dim == 7
        assert center_dimension(q) == 1
        assert q.jacobi_residual() <= 1e-10

    def test_parent_constants_integer_and_jacobi(self):
        _, spec = dl_quotient(2)
        c = spec.parent.structure
        assert np.array_equal(c, np.round(c))
        assert spec.parent.jacobi_residual() <= 1e-10
        assert center_dimension(spec.parent) == 2  # (i*1, 0) and (0, i*1)

    def test_rational_theta_also_central(self):
        q, _ = dl_quotient(2, theta=QuadraticRational(Fraction(3)))
        assert q.dim == 7

    def test_non_central_ideal_rejected(self):
        _, spec = dl_quotient(2)
        one = QuadraticRational(Fraction(1))
        zero = QuadraticRational(Fraction(0))
        bad = (one,) + (zero,) * 6 + (one,)  # mixes in a root vector
        with pytest.raises(ValueError):
            QuotientAlgebraSpec(spec.parent, bad, pivot=0)

    def test_pivot_normalization_checked(self):
        _, spec = dl_quotient(2)
        with pytest.raises(ValueError):
            QuotientAlgebraSpec(spec.parent, spec.ideal_exact, pivot=2)

    def test_desk_scale_guard(self):
        with pytest.raises(ValueError):
            dl_quotient(3)

    def test_quotient_bracket_well_defined(self):
        # Substituting the pivot relation commutes with bracketing: quotient
        # constants reproduce the parent bracket projected along the ideal.
        q, spec = dl_quotient(2)
        d, p = spec.parent.dim, spec.pivot
        keep = [i for i in range(d) if i != p]
        v = np.array([float(x) for x in spec.ideal_exact])
        rng = np.random.default_rng(4)
        for _ in range(10):
            a, b = rng.standard_normal(7), rng.standard_normal(7)
            # Lift, bracket upstairs, project back down.
            A = np.zeros(d)
            B = np.zeros(d)
            A[keep], B[keep] = a, b
            top = spec.parent.bracket(A, B)
            proj = top[keep] - top[p] * v[keep]
            assert np.max(np.abs(q.bracket(a, b) - proj)) <= 1e-10
