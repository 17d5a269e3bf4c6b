import math

import numpy as np
import pytest

from tangentkit.catalog import get_omega
from tangentkit.cocycle import (
    check_cocycle,
    differentiate_cocycle,
)
from tangentkit.errors import ChartConsistencyError, DomainError
from tangentkit.groups import get_group
from tangentkit.program import trace
from tangentkit.vanest import (
    LeftInvariantTwoForm,
    QuadratureRule,
    TwoCycle,
    check_d2,
    form_at,
    fundamental_cycle,
    gamma_map,
    integrate_f0,
    period,
    square_rule,
    theta_apply,
    triangle_rule,
    vanest_cocycle,
)


@pytest.fixture(scope="module")
def rng():
    return np.random.default_rng(11)


@pytest.fixture(scope="module")
def tri():
    return triangle_rule(7)


class TestQuadrature:
    @pytest.mark.parametrize("degree", [1, 3, 5, 7, 9])
    def test_triangle_exactness(self, degree):
        rule = triangle_rule(degree)
        for p in range(degree + 1):
            for q in range(degree + 1 - p):
                got = float(np.dot(rule.weights,
                                   rule.nodes[:, 0] ** p
                                   * rule.nodes[:, 1] ** q))
                want = (math.factorial(p) * math.factorial(q)
                        / math.factorial(p + q + 2))
                assert abs(got - want) <= 1e-12

    def test_square_measure(self):
        rule = square_rule(7)
        assert abs(rule.weights.sum() - 1.0) <= 1e-14

    def test_declared_degree_verified(self):
        nodes = np.array([[0.5, 0.25]])
        weights = np.array([0.5])
        with pytest.raises(ValueError):
            QuadratureRule("triangle", 3, nodes, weights)


class TestTranslation:
    def test_theta_identity_at_origin(self, rng):
        for name in ("su2", "so3", "affine1"):
            G = get_group(name)
            v = list(rng.uniform(-1, 1, G.dim))
            (out,) = theta_apply(G, [0.0] * G.dim, [v])
            assert np.max(np.abs(np.array(out) - v)) <= 1e-12

    def test_form_at_identity_and_antisymmetry(self, rng):
        G = get_group("su2")
        om = get_omega("coboundary", G)
        wl = LeftInvariantTwoForm(om, G)
        a, b = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
        assert np.max(np.abs(form_at(wl, np.zeros(3), a, b)
                             - om.value(a, b))) <= 1e-12
        z = rng.uniform(-0.2, 0.2, 3)
        assert np.max(np.abs(form_at(wl, z, a, b)
                             + form_at(wl, z, b, a))) <= 1e-12

    def test_abelian_form_constant(self, rng):
        G = get_group("rn:2")
        wl = LeftInvariantTwoForm(get_omega("symplectic", G), G)
        a, b = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
        v0 = form_at(wl, np.zeros(2), a, b)
        v1 = form_at(wl, rng.uniform(-3, 3, 2), a, b)
        assert np.array_equal(v0, v1)

    def test_singular_jacobian_detected(self):
        # A degenerate "multiplication" with vanishing second-slot
        # derivative must be flagged.
        bad = trace(lambda v: [v[0] + v[1] * v[1]], 2)
        from tangentkit.liegroup import ChartedGroup
        G = ChartedGroup("bad", 1, bad, trace(lambda v: [-v[0]], 1), 1.0)
        with pytest.raises(ChartConsistencyError):
            theta_apply(G, [0.0], [[1.0]])


class TestGamma:
    def test_endpoints(self, rng):
        G = get_group("su2")
        x, y = rng.uniform(-0.3, 0.3, 3), rng.uniform(-0.3, 0.3, 3)
        g = gamma_map(G, x, y)
        assert np.max(np.abs(g.eval_array([0.0, 0.0]))) <= 1e-15
        assert np.max(np.abs(g.eval_array([1.0, 0.0]) - x)) <= 1e-15
        xy = G.mult.eval_array(np.concatenate([x, y]))
        assert np.max(np.abs(g.eval_array([0.0, 1.0]) - xy)) <= 1e-14

    def test_abelian_closed_form(self, rng):
        G = get_group("rn:2")
        x, y = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
        g = gamma_map(G, x, y)
        t, s = 0.3, 0.45
        want = (t + s) * x + s * y
        assert np.max(np.abs(g.eval_array([t, s]) - want)) <= 1e-14

    def test_domain_excursion(self, tri):
        G = get_group("affine1")
        om = get_omega("coboundary", G)
        with pytest.raises(DomainError):
            integrate_f0(G, om, np.array([0.85, 0.0]),
                         np.array([0.85, 0.0]), tri)


class TestF0:
    def test_abelian_closed_form(self, rng, tri):
        G = get_group("rn:2")
        om = get_omega("symplectic", G)
        for _ in range(20):
            x, y = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
            got = integrate_f0(G, om, x, y, tri)[0]
            want = 0.5 * (x[0] * y[1] - x[1] * y[0])
            assert abs(got - want) <= 1e-12

    def test_degenerate_and_zero_form(self, rng, tri):
        G = get_group("rn:2")
        om = get_omega("symplectic", G)
        x = rng.uniform(-1, 1, 2)
        assert np.max(np.abs(integrate_f0(G, om, x, np.zeros(2), tri))) <= 1e-12
        zero = get_omega("zero", G)
        assert np.max(np.abs(integrate_f0(G, zero, x, x + 1.0, tri))) == 0.0

    def test_d2_abelian_and_su2(self, tri):
        G2 = get_group("rn:2")
        assert check_d2(G2, get_omega("symplectic", G2), tri, 1e-12) <= 1e-12
        su2 = get_group("su2")
        assert check_d2(su2, get_omega("coboundary", su2), tri, 1e-8) <= 1e-8

    def test_differentiation_recovers_omega(self, tri):
        for name, tol in (("rn:2", 1e-10), ("su2", 1e-7), ("so3", 1e-7)):
            G = get_group(name)
            om = (get_omega("symplectic", G) if name == "rn:2"
                  else get_omega("coboundary", G))
            f = vanest_cocycle(G, om, tri)
            gap = np.max(np.abs(differentiate_cocycle(f).tensor - om.tensor))
            assert gap <= tol

    def test_cocycle_identity_su2(self, rng, tri):
        su2 = get_group("su2")
        f = vanest_cocycle(su2, get_omega("coboundary", su2), tri)
        assert check_cocycle(su2, f, rng, samples=20, tol=1e-7) <= 1e-7


class TestPeriod:
    def test_fundamental_cycle(self):
        torus = get_group("torus2")
        om = get_omega("symplectic", torus)
        p = period(torus, om, fundamental_cycle(2), square_rule(7))
        assert abs(p[0] - 1.0) <= 1e-10

    def test_constant_cycle_vanishes(self):
        torus = get_group("torus2")
        om = get_omega("symplectic", torus)
        const = trace(lambda v: [0.1 + 0.0 * v[0], 0.2 + 0.0 * v[1]], 2)
        p = period(torus, om, TwoCycle(const), square_rule(5))
        assert np.max(np.abs(p)) == 0.0

    def test_edge_identification_enforced(self):
        skew = trace(lambda v: [v[0] + 0.5 * v[1], v[1]], 2)
        cyc = TwoCycle(skew, (np.array([1.0, 0.0]), np.array([0.0, 1.0])))
        with pytest.raises(ChartConsistencyError):
            cyc.check_identifications()
