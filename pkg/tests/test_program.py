import numpy as np
import pytest

from tangentkit._kernels import _mul_python
from tangentkit.errors import DomainError
from tangentkit.jet import JetScalar
from tangentkit.program import (
    CallableProgram,
    compose,
    cos,
    exp,
    fd_jacobian,
    format_program,
    parse_program,
    partial_tangent,
    pow_int,
    sin,
    sqrt,
    tangent,
    trace,
)


def cube():
    return trace(lambda v: [v[0] ** 3], 1)


class TestTracing:
    def test_traced_polynomial(self):
        p = trace(lambda v: [v[0] * v[1] + 2.0, v[0] - v[1]], 2)
        assert np.array_equal(p.eval_array([3.0, 4.0]), [14.0, -1.0])

    def test_traced_analytic(self):
        p = trace(lambda v: [sin(v[0]) * exp(v[1])], 2)
        x = np.array([0.3, -0.2])
        assert abs(p.eval_array(x)[0]
                   - np.sin(0.3) * np.exp(-0.2)) < 1e-15

    def test_arity_enforced(self):
        with pytest.raises(ValueError):
            cube()([1.0, 2.0])

    def test_constant_folding_cache(self):
        p = trace(lambda v: [v[0] + 1.0, v[0] - 1.0, v[0] * 1.0], 1)
        consts = [n for n in p.nodes if n[0] == "const"]
        assert len(consts) == 1  # 1.0 recorded once


class TestTangent:
    def test_matches_finite_differences(self):
        p = trace(lambda v: [sin(v[0] * v[1]), v[0] ** 2 - cos(v[1])], 2)
        x = np.array([0.4, -0.7])
        jac = fd_jacobian(p, x)
        tp = tangent(p)
        for j in range(2):
            e = np.zeros(2)
            e[j] = 1.0
            out = tp.eval_array(np.concatenate([x, e]))
            assert np.max(np.abs(out[2:] - jac[:, j])) < 1e-9

    def test_chain_rule_bitwise(self):
        f = trace(lambda v: [v[0] * v[1], v[0] + v[1], v[1] ** 2], 2)
        g = trace(lambda v: [v[0] * v[2] - v[1]], 3)
        x = np.array([0.5, -1.25, 1.0, 0.75])
        lhs = tangent(compose(g, f)).eval_array(x)
        rhs = compose(tangent(g), tangent(f)).eval_array(x)
        assert np.array_equal(lhs, rhs)

    def test_second_order_ordering(self):
        # T(T f) on f(x) = x^3 at x=2 with unit seeds:
        # (f, f' v0, f' v1, f'' v0 v1).
        t2 = tangent(tangent(cube()))
        out = t2.eval_array([2.0, 1.0, 1.0, 0.0])
        assert np.array_equal(out, [8.0, 12.0, 12.0, 12.0])

    def test_order_cap(self):
        t3 = tangent(tangent(tangent(cube())))
        with pytest.raises(ValueError):
            tangent(t3).eval_array([1.0] * 16)

    def test_partial_tangent_layouts(self):
        p = trace(lambda v: [v[0] * v[1]], 2)
        t1 = partial_tangent(p, (1, 1), 1)   # [x, dx, y]
        t2 = partial_tangent(p, (1, 1), 2)   # [x, y, dy]
        assert np.array_equal(t1.eval_array([3.0, 1.0, 4.0]), [12.0, 4.0])
        assert np.array_equal(t2.eval_array([3.0, 4.0, 1.0]), [12.0, 3.0])

    def test_mixed_partials_symmetric(self):
        p = trace(lambda v: [sin(v[0]) * v[1] ** 2], 2)
        a = partial_tangent(partial_tangent(p, (1, 1), 2), (1, 2), 1)
        x, y = 0.3, 1.2
        out = a.eval_array([x, 1.0, y, 1.0])
        want = np.cos(x) * 2 * y
        assert abs(out[-1] - want) < 1e-14


class TestDomainGuards:
    def test_float_division_by_zero(self):
        p = trace(lambda v: [v[0] / v[1]], 2)
        with pytest.raises(DomainError):
            p.eval_array([1.0, 0.0])

    def test_sqrt_domain(self):
        p = trace(lambda v: [sqrt(v[0])], 1)
        with pytest.raises(DomainError):
            p.eval_array([-2.0])

    def test_pow_int_rejects_float_exponent(self):
        with pytest.raises(TypeError):
            pow_int(2.0, 0.5)


class TestSerialization:
    def test_round_trip(self):
        text = "(lambda (x0 x1) (+ (* x0 x1) (sin x0)) (pow x1 3))"
        p = parse_program(text)
        q = parse_program(format_program(p))
        x = np.array([0.7, -1.3])
        assert np.array_equal(p.eval_array(x), q.eval_array(x))

    def test_unary_minus_and_constants(self):
        p = parse_program("(lambda (x0) (- (* 2.5 x0)))")
        assert p.eval_array([2.0])[0] == -5.0

    def test_rejects_unknown_operator(self):
        with pytest.raises(ValueError):
            parse_program("(lambda (x0) (sinh x0))")

    def test_rejects_duplicate_params(self):
        with pytest.raises(ValueError):
            parse_program("(lambda (x0 x0) x0)")


class TestBackends:
    def test_python_kernel_matches_naive_convolution(self):
        rng = np.random.default_rng(0)
        for order in (1, 2, 3):
            size = 1 << order
            a, b = rng.standard_normal(size), rng.standard_normal(size)
            got = _mul_python(a, b)
            want = np.zeros(size)
            for s in range(size):
                for sub in range(size):
                    if sub & s == sub:
                        want[s] += a[sub] * b[s ^ sub]
            assert np.max(np.abs(got - want)) < 1e-14

    def test_numba_kernel_bit_identical(self):
        numba = pytest.importorskip("numba")
        from tangentkit._kernels import _make_numba_kernel
        kern = _make_numba_kernel()
        rng = np.random.default_rng(1)
        for _ in range(50):
            a, b = rng.standard_normal(8), rng.standard_normal(8)
            assert np.array_equal(kern(a, b), _mul_python(a, b))

    def test_permutation_invariance_bitwise(self):
        # Sorting summands makes the product commute with slot swaps
        # exactly, not just approximately.
        from tangentkit.jet import JetVector, flip
        rng = np.random.default_rng(2)
        for _ in range(50):
            a = JetScalar(2, rng.standard_normal(4))
            b = JetScalar(2, rng.standard_normal(4))
            prod = JetVector((a * b,))
            fa = flip(JetVector((a,)), 1).components[0]
            fb = flip(JetVector((b,)), 1).components[0]
            swapped = flip(JetVector((fa * fb,)), 1)
            assert np.array_equal(prod.table(), swapped.table())


class TestCallablePrograms:
    def test_wrapper_supports_jets(self):
        def fn(xs):
            return [xs[0] * xs[0] + xs[1]]

        p = CallableProgram(fn, 2, 1, "sq")
        out = tangent(p).eval_array([3.0, 1.0, 1.0, 0.0])
        assert np.array_equal(out, [10.0, 6.0])
