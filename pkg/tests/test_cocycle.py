import numpy as np
import pytest

from tangentkit.catalog import get_cocycle, get_omega
from tangentkit.cocycle import (
    AlgebraCocycle,
    GroupCocycle,
    check_cocycle,
    coboundary_of,
    differentiate_cocycle,
    extend_algebra,
    extend_group,
    mixed_hessian,
    verify_extension_differentiation,
)
from tangentkit.errors import ChartConsistencyError
from tangentkit.groups import get_group
from tangentkit.liegroup import bracket_conjugation, structure_constants
from tangentkit.program import fd_jacobian, tangent, trace


@pytest.fixture(scope="module")
def rng():
    return np.random.default_rng(7)


@pytest.fixture(scope="module")
def heis():
    return get_cocycle("heis", get_group("rn:2"))


class TestGroupCocycle:
    def test_normalization_and_identity(self, heis, rng):
        assert check_cocycle(get_group("rn:2"), heis, rng) <= 1e-10

    def test_unnormalized_rejected(self, rng):
        f = GroupCocycle(trace(lambda v: [v[0] + 1.0], 4), 2, 1, 10.0)
        with pytest.raises(ChartConsistencyError):
            f.check_normalization(rng)

    def test_coboundary_satisfies_identity(self, rng):
        G = get_group("so3")
        f = get_cocycle("coboundary:quadratic", G)
        assert check_cocycle(G, f, rng, tol=1e-12) <= 1e-12


class TestDifferentiation:
    def test_heisenberg_formula(self, heis):
        L = differentiate_cocycle(heis)
        assert np.array_equal(L.tensor, [[[0.0, 1.0], [-1.0, 0.0]]])

    def test_mixed_hessian_vs_finite_differences(self, heis):
        # d2f(x, y) at (e, e) via central differences of the gradient.
        h = 1e-4
        x, y = np.array([0.7, -0.3]), np.array([0.2, 0.9])
        fd = (heis.value(h * x, h * y) - heis.value(h * x, -h * y)
              - heis.value(-h * x, h * y) + heis.value(-h * x, -h * y))
        fd /= 4 * h * h
        got = mixed_hessian(heis, x, y)
        assert np.max(np.abs(got - fd)) < 1e-8

    def test_linear_coboundary_differentiates_to_zero_on_abelian(self):
        G = get_group("rn:2")
        f = get_cocycle("coboundary:linear", G)
        assert np.max(np.abs(differentiate_cocycle(f).tensor)) == 0.0

    def test_coboundary_differentiates_to_potential_of_bracket(self):
        # L(coboundary of h)(x, y) = Dh(e)[x, y].
        G = get_group("so3")
        h = trace(lambda v: [0.5 * v[0] - v[1] * v[2] + 0.25 * v[2]], 3)
        f = coboundary_of(G, h)
        L = differentiate_cocycle(f).tensor[0]
        dh = fd_jacobian(h, np.zeros(3))[0]
        c = structure_constants(G).structure
        want = np.einsum("ijk,k->ij", c, dh)
        assert np.max(np.abs(L - want)) < 1e-9

    def test_unnormalized_cocycle_raises_in_hessian(self):
        f = GroupCocycle(trace(lambda v: [v[0] + v[2]], 4), 2, 1, 10.0)
        with pytest.raises(ChartConsistencyError):
            mixed_hessian(f, [1.0, 0.0], [1.0, 0.0])


class TestExtensions:
    def test_heisenberg_presentation(self, heis, rng):
        ext = extend_group(get_group("rn:2"), heis)
        ext.validate(rng)
        got = structure_constants(ext).structure
        want = structure_constants(get_group("heisenberg3")).structure
        assert np.max(np.abs(got - want)) == 0.0

    def test_extend_algebra_heisenberg(self):
        g2 = structure_constants(get_group("rn:2"))
        sympl = get_omega("symplectic", get_group("rn:2"))
        ext = extend_algebra(g2, sympl)
        want = structure_constants(get_group("heisenberg3")).structure
        assert np.array_equal(ext.structure, want)

    def test_zero_cocycle_gives_direct_sum(self, rng):
        G = get_group("so3")
        z = get_cocycle("zero", G)
        ext = structure_constants(extend_group(G, z)).structure
        c = structure_constants(G).structure
        want = np.zeros((4, 4, 4))
        want[:3, :3, :3] = c
        assert np.max(np.abs(ext - want)) <= 1e-12

    def test_centrality(self, heis, rng):
        ext = extend_group(get_group("rn:2"), heis)
        a = np.array([0.0, 0.0, 0.8])
        w = rng.uniform(-1, 1, 3) * ext.sample_radius
        assert np.max(np.abs(bracket_conjugation(ext, a, w))) <= 1e-10

    @pytest.mark.parametrize("group,cocycle", [
        ("rn:2", "heis"),
        ("so3", "coboundary:quadratic"),
        ("affine1", "coboundary:linear"),
    ])
    def test_differentiation_intertwines_extensions(self, group, cocycle):
        G = get_group(group)
        f = get_cocycle(cocycle, G)
        assert verify_extension_differentiation(G, f) <= 1e-8

    def test_cohomology_invariance_under_coboundary_shift(self, heis):
        # Adding a coboundary changes the extension by the basis change
        # (g, a) -> (g, a + h(g)); the constants transform accordingly.
        G = get_group("rn:2")
        h = trace(lambda v: [0.5 * v[0] * v[1] - 0.25 * v[0]], 2)
        delta = coboundary_of(G, h)

        def shifted(xs):
            return [u + v for u, v in zip(heis.program.eval(list(xs)),
                                          delta.program.eval(list(xs)))]

        from tangentkit.program import CallableProgram
        f2 = GroupCocycle(CallableProgram(shifted, 4, 1, "f+dh"), 2, 1,
                          heis.radius)
        c1 = structure_constants(extend_group(G, heis)).structure
        c2 = structure_constants(extend_group(G, f2)).structure
        dh = fd_jacobian(h, np.zeros(2))[0]
        m = np.eye(3)
        m[2, :2] = dh            # (x, a) -> (x, a + Dh(e) x)
        n = np.linalg.inv(m)
        # bracket2(u, v) = M [M^-1 u, M^-1 v]_1
        trans = np.einsum("ai,bj,abm,km->ijk", n, n, c1, m)
        assert np.max(np.abs(c2 - trans)) <= 1e-8


class TestAlgebraCocycle:
    def test_antisymmetry_enforced(self):
        with pytest.raises(ValueError):
            AlgebraCocycle(2, 1, np.ones((1, 2, 2)))

    def test_identity_residual_zero_for_coboundary(self):
        G = get_group("so3")
        om = get_omega("coboundary", G)
        assert om.identity_residual(structure_constants(G)) <= 1e-12
