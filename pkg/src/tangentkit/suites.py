"""Named verification suites: each check measures one identity's residual.

Suites are deterministic functions of the seed; every sampled quantity is
drawn from one seeded generator per suite.  Check names are stable, so
reports sort identically across runs.
"""

from __future__ import annotations

import time

import numpy as np

from .catalog import get_cocycle, get_group, get_lattice, get_omega
from .cocycle import (
    AlgebraCocycle,
    GroupCocycle,
    check_cocycle,
    cocycle_identity_residual,
    differentiate_cocycle,
    extend_algebra,
    extend_group,
    verify_extension_differentiation,
)
from .ekdl import (
    center_dimension,
    dl_quotient,
    ek_cocycle,
    ek_cocycle_oracle,
    ek_extension_check,
    random_loop,
)
from .jet import JetVector, flip, lift_at, vertical_lift
from .lattice import (
    coset_equal,
    get_lattice as _get_lattice,
    reduced_cocycle,
    shift_invariance_check,
)
from .liegroup import (
    bracket_conjugation,
    bracket_delta,
    oracle_bracket,
    structure_constants,
)
from .program import CallableProgram, compose, tangent, trace
from .report import Check, Report, merge_reports, residual_check
from .vanest import (
    check_d2,
    fundamental_cycle,
    integrate_f0,
    period,
    square_rule,
    triangle_rule,
    vanest_cocycle,
)


def _timed(name, anchor, tol, fn) -> Check:
    t0 = time.perf_counter()
    value = float(fn())
    return residual_check(name, anchor, value, tol,
                          wall_time=time.perf_counter() - t0)


def _random_table(rng, dim, order):
    # Dyadic coefficients keep the structural identities exact in floats.
    return np.round(rng.uniform(-4, 4, (dim, 1 << order)) * 16.0) / 16.0


_PROGRAM_POOL = (
    trace(lambda v: [v[0] * v[1] + v[2] ** 3, v[0] - 2.0 * v[2]], 3),
    trace(lambda v: [v[0] * (v[1] + 1.0), v[1] * v[2] * v[0], v[2] + 0.5], 3),
    trace(lambda v: [v[0] ** 2 - v[1] * v[2], v[0] * v[1] + v[2]], 3),
)

import math as _math

from .program import cos as _cos, exp as _exp, sin as _sin

_ANALYTIC_POOL = (
    trace(lambda v: [_sin(v[0]) + v[1] * v[2], _exp(v[1] * 0.25)], 3),
    trace(lambda v: [_cos(v[0] * v[1]), v[2] * _sin(v[1])], 3),
)


def suite_tangent_axioms(seed: int, **_) -> Report:
    rng = np.random.default_rng(seed)
    checks = []

    def involution():
        worst = 0.0
        for _ in range(500):
            v = JetVector.from_table(_random_table(rng, 3, 2), 2)
            worst = max(worst, float(np.max(np.abs(
                flip(flip(v, 1), 1).table() - v.table()))))
        return worst

    def braid():
        worst = 0.0
        for _ in range(500):
            v = JetVector.from_table(_random_table(rng, 2, 3), 3)
            lhs = flip(flip(flip(v, 1), 2), 1)
            rhs = flip(flip(flip(v, 2), 1), 2)
            worst = max(worst, float(np.max(np.abs(lhs.table() - rhs.table()))))
        return worst

    def coassoc():
        worst = 0.0
        for _ in range(500):
            v = JetVector.from_table(_random_table(rng, 3, 1), 1)
            lam = vertical_lift(v)
            worst = max(worst, float(np.max(np.abs(
                lift_at(lam, 1).table() - lift_at(lam, 2).table()))))
        return worst

    def lift_kernel():
        # T(pi) o lambda = 0 o pi: dropping the inner slot of lambda(v)
        # leaves the zero section over the footprint.
        worst = 0.0
        for _ in range(500):
            v = JetVector.from_table(_random_table(rng, 3, 1), 1)
            lam = vertical_lift(v).table()
            dropped = lam[:, 0::2]                   # remove slot 1
            want = np.zeros_like(dropped)
            want[:, 0] = v.table()[:, 0]
            worst = max(worst, float(np.max(np.abs(dropped - want))))
        return worst

    def naturality():
        worst = 0.0
        for _ in range(100):
            p = _PROGRAM_POOL[int(rng.integers(len(_PROGRAM_POOL)))]
            t2p = tangent(tangent(p))
            xs = [JetVector.from_table(_random_table(rng, 1, 2), 2)
                  .components[0] for _ in range(p.arity)]
            flipped = [c for jv in
                       [flip(JetVector(tuple(xs)), 1)] for c in jv.components]
            lhs = flip(JetVector(tuple(_run_t2(t2p, xs))), 1)
            rhs = JetVector(tuple(_run_t2(t2p, flipped)))
            worst = max(worst, float(np.max(np.abs(
                lhs.table() - rhs.table()))))
        return worst

    def chain_rule():
        worst = 0.0
        f = _PROGRAM_POOL[1]  # codim 3 matches the pool's arity
        for _ in range(100):
            g = _PROGRAM_POOL[0] if rng.integers(2) else _PROGRAM_POOL[2]
            both = compose(tangent(g), tangent(f))
            joint = tangent(compose(g, f))
            x = np.round(rng.uniform(-2, 2, 6) * 16.0) / 16.0
            worst = max(worst, float(np.max(np.abs(
                both.eval_array(x) - joint.eval_array(x)))))
        return worst

    anchor = "tangent-structure axiom"
    checks.append(_timed("axiom-flip-involution", anchor + ": flip o flip = id",
                         1e-12, involution))
    checks.append(_timed("axiom-braid", anchor + ": braid relation in T^3",
                         1e-12, braid))
    checks.append(_timed("axiom-lift-coassociativity",
                         anchor + ": T(lift) o lift = lift_T o lift",
                         1e-12, coassoc))
    checks.append(_timed("axiom-lift-kernel",
                         anchor + ": T(proj) o lift = zero o proj",
                         1e-12, lift_kernel))
    checks.append(_timed("axiom-flip-naturality",
                         anchor + ": flip o T^2 f = T^2 f o flip",
                         1e-12, naturality))
    checks.append(_timed("axiom-chain-rule",
                         anchor + ": T(g o f) = Tg o Tf", 1e-12, chain_rule))
    return Report("tangent-axioms", seed, tuple(checks))


def _run_t2(t2p, jets):
    """Feed order-2 jet scalars through a doubly-wrapped tangent program."""
    n = len(jets)
    # Interleave manually: [base rows | slot-1 rows | slot-2 rows | mixed].
    ins = ([j.coeffs[0] for j in jets] + [j.coeffs[1] for j in jets]
           + [j.coeffs[2] for j in jets] + [j.coeffs[3] for j in jets])
    out = t2p.eval([float(v) for v in ins])
    m = len(out) // 4
    from .jet import JetScalar
    return [JetScalar(2, np.array([out[i], out[m + i],
                                   out[2 * m + i], out[3 * m + i]]))
            for i in range(m)]


_BRACKET_GROUPS = ("heisenberg3", "affine1", "so3", "su2")


def suite_brackets(seed: int, **_) -> Report:
    rng = np.random.default_rng(seed)
    checks = []
    for name in _BRACKET_GROUPS:
        G = get_group(name)
        conj = G.conjugation()
        gap_dc, gap_oracle = 0.0, 0.0
        for _ in range(100):
            v = rng.uniform(-1, 1, G.dim) * G.sample_radius
            w = rng.uniform(-1, 1, G.dim) * G.sample_radius
            bd = bracket_delta(G, v, w)
            bc = bracket_conjugation(G, v, w, conj=conj)
            gap_dc = max(gap_dc, float(np.max(np.abs(bd - bc))))
            ob = oracle_bracket(G, v, w)
            gap_oracle = max(gap_oracle, float(np.max(np.abs(bd - ob))),
                             float(np.max(np.abs(bc - ob))))
        checks.append(residual_check(
            f"bracket-{name}-delta-vs-conjugation",
            "bracket via the vertical-map difference equals the "
            "conjugation-Hessian bracket", gap_dc, 1e-10))
        checks.append(residual_check(
            f"bracket-{name}-vs-matrix-oracle",
            "chart bracket equals the matrix commutator", gap_oracle, 1e-9))
        checks.append(residual_check(
            f"bracket-{name}-jacobi",
            "Jacobi identity of the derived bracket",
            structure_constants(G).jacobi_residual(), 1e-8))
    return Report("brackets", seed, tuple(checks))


def suite_extensions(seed: int, degree: int = 7, **_) -> Report:
    rng = np.random.default_rng(seed)
    checks = []
    G2 = get_group("rn:2")
    heis = get_cocycle("heis", G2)
    checks.append(_timed(
        "extension-heisenberg-differentiation",
        "Lie algebra of the f-extended group is the L(f)-extended algebra",
        1e-8, lambda: verify_extension_differentiation(G2, heis)))

    so3 = get_group("so3")
    cb = get_cocycle("coboundary:quadratic", so3)
    checks.append(_timed(
        "extension-so3-coboundary-differentiation",
        "Lie algebra of the f-extended group is the L(f)-extended algebra",
        1e-8, lambda: verify_extension_differentiation(so3, cb)))

    torus = get_group("torus2")
    vc = get_cocycle("vanest:symplectic", torus, degree=degree)
    checks.append(_timed(
        "extension-vanest-torus-differentiation",
        "Lie algebra of the f-extended group is the L(f)-extended algebra",
        1e-8, lambda: verify_extension_differentiation(torus, vc)))

    def centrality():
        ext = extend_group(G2, heis)
        worst = 0.0
        for _ in range(25):
            a = np.zeros(3)
            a[2] = rng.uniform(-1, 1)
            w = rng.uniform(-1, 1, 3) * ext.sample_radius
            worst = max(worst, float(np.max(np.abs(
                bracket_conjugation(ext, a, w)))))
        return worst

    checks.append(_timed(
        "extension-centrality",
        "the extension fiber is central: [(0, a), .] = 0",
        1e-10, centrality))

    def linearity():
        f1, f2 = heis, get_cocycle("coboundary:quadratic", G2)
        a, b = 2.0, 0.5

        def combo(xs):
            y1 = f1.program.eval(list(xs))
            y2 = f2.program.eval(list(xs))
            return [a * u + b * v for u, v in zip(y1, y2)]

        fc = GroupCocycle(CallableProgram(combo, 4, 1, "combo"), 2, 1,
                          min(f1.radius, f2.radius), name="combo")
        lhs = differentiate_cocycle(fc).tensor
        rhs = (a * differentiate_cocycle(f1).tensor
               + b * differentiate_cocycle(f2).tensor)
        return float(np.max(np.abs(lhs - rhs)))

    checks.append(_timed(
        "extension-differentiation-linearity",
        "L is linear in the group cocycle", 1e-10, linearity))
    return Report("extensions", seed, tuple(checks))


def suite_vanest(seed: int, degree: int = 7, samples: int = 200, **_) -> Report:
    rng = np.random.default_rng(seed)
    checks = []
    rule = triangle_rule(degree)

    G2 = get_group("rn:2")
    sympl = get_omega("symplectic", G2)

    def abelian_f0():
        worst = 0.0
        for _ in range(50):
            x, y = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
            got = integrate_f0(G2, sympl, x, y, rule)[0]
            worst = max(worst, abs(got - 0.5 * (x[0] * y[1] - x[1] * y[0])))
        return worst

    checks.append(_timed(
        "vanest-abelian-closed-form",
        "simplex integral of the constant form has the closed form "
        "(x1 y2 - x2 y1)/2", 1e-12, abelian_f0))

    def degenerate():
        x = rng.uniform(-1, 1, 2)
        return max(float(np.max(np.abs(
            integrate_f0(G2, sympl, x, np.zeros(2), rule)))),
            float(np.max(np.abs(
                integrate_f0(G2, sympl, np.zeros(2), x, rule)))))

    checks.append(_timed(
        "vanest-degenerate-simplex",
        "f0(x, e) = f0(e, y) = 0", 1e-12, degenerate))

    checks.append(_timed(
        "vanest-abelian-d2",
        "mixed second derivative of f0 equals omega/2",
        1e-12, lambda: check_d2(G2, sympl, rule, 1e-12)))

    f_ab = vanest_cocycle(G2, sympl, rule)
    checks.append(_timed(
        "vanest-abelian-differentiation",
        "L of the integrated cocycle returns omega",
        1e-10, lambda: float(np.max(np.abs(
            differentiate_cocycle(f_ab).tensor - sympl.tensor)))))

    su2 = get_group("su2")
    om = get_omega("coboundary", su2)
    checks.append(_timed(
        "vanest-su2-d2",
        "mixed second derivative of f0 equals omega/2",
        1e-8, lambda: check_d2(su2, om, rule, 1e-8)))

    f_su = vanest_cocycle(su2, om, rule)
    checks.append(_timed(
        "vanest-su2-differentiation",
        "L of the integrated cocycle returns omega",
        1e-7, lambda: float(np.max(np.abs(
            differentiate_cocycle(f_su).tensor - om.tensor)))))

    checks.append(_timed(
        "vanest-su2-cocycle-identity",
        "integrated f0 satisfies the group 2-cocycle identity",
        1e-7, lambda: cocycle_identity_residual(su2, f_su, rng,
                                                samples=samples)))

    def refinement():
        fine = triangle_rule(2 * degree)
        x = rng.uniform(-0.25, 0.25, 3)
        y = rng.uniform(-0.25, 0.25, 3)
        return float(np.max(np.abs(integrate_f0(su2, om, x, y, rule)
                                   - integrate_f0(su2, om, x, y, fine))))

    checks.append(_timed(
        "vanest-quadrature-refinement",
        "doubling the rule degree moves f0 below tolerance",
        1e-9, refinement))
    return Report("vanest", seed, tuple(checks))


def suite_periods(seed: int, degree: int = 7, **_) -> Report:
    rng = np.random.default_rng(seed)
    checks = []
    sq = square_rule(degree)
    torus = get_group("torus2")
    sympl = get_omega("symplectic", torus)
    cyc = fundamental_cycle(2)

    p = period(torus, sympl, cyc, sq)
    checks.append(residual_check(
        "period-fundamental-cycle",
        "period of the area form over the fundamental torus cycle is 1",
        abs(p[0] - 1.0), 1e-10))

    const = trace(lambda v: [0.25 + 0.0 * v[0], -0.5 + 0.0 * v[1]], 2)
    from .vanest import TwoCycle
    p0 = period(torus, sympl, TwoCycle(const), sq)
    checks.append(residual_check(
        "period-degenerate-cycle",
        "period over a constant cycle vanishes",
        float(np.max(np.abs(p0))), 0.0))

    def bilinear():
        doubled = AlgebraCocycle(2, 1, 2.0 * sympl.tensor)
        gap1 = float(np.max(np.abs(period(torus, doubled, cyc, sq)
                                   - 2.0 * p)))
        stacked = AlgebraCocycle(
            2, 2, np.concatenate([sympl.tensor, 2.0 * sympl.tensor]))
        ps = period(torus, stacked, cyc, sq)
        gap2 = max(abs(ps[0] - p[0]), abs(ps[1] - 2.0 * p[0]))
        return max(gap1, gap2)

    checks.append(_timed(
        "period-bilinearity",
        "period is linear in omega, exactly", 0.0, bilinear))

    def reduced_identity():
        rule = triangle_rule(degree)
        f = vanest_cocycle(torus, sympl, rule)
        z1 = _get_lattice("Z1")
        fr = reduced_cocycle(f, z1)
        ok = True
        for _ in range(50):
            g, h, k = (rng.uniform(-1, 1, 2) for _ in range(3))
            gh = torus.mult.eval_array(np.concatenate([g, h]))
            hk = torus.mult.eval_array(np.concatenate([h, k]))
            lhs = fr.value(g, h) + fr.value(gh, k)
            rhs = fr.value(h, k) + fr.value(g, hk)
            ok = ok and coset_equal(z1, lhs, rhs)
        return 0.0 if ok else 1.0

    checks.append(_timed(
        "period-reduced-cocycle-identity",
        "the lattice-reduced cocycle satisfies the 2-cocycle identity in "
        "coset arithmetic", 0.0, reduced_identity))
    return Report("periods", seed, tuple(checks))


def suite_quotients(seed: int, **_) -> Report:
    rng = np.random.default_rng(seed)
    checks = []
    torus = get_group("torus2")
    shifts = [[1.0, 0.0], [0.0, 1.0], [3.0, -2.0], [1.0, 1.0]]
    checks.append(_timed(
        "quotient-torus-shift-invariance",
        "structure constants are invariant under lattice shifts of the "
        "chart representatives", 0.0,
        lambda: shift_invariance_check(torus, shifts, tol=np.inf)))

    line = get_group("rn:1")
    alpha = float(np.sqrt(2.0))
    checks.append(_timed(
        "quotient-irrational-torus-shift-invariance",
        "structure constants are invariant under dense-subgroup shifts",
        0.0, lambda: shift_invariance_check(
            line, [[1.0], [alpha], [3.0 + 2.0 * alpha]], tol=np.inf)))

    def exact_cosets():
        from fractions import Fraction
        from .lattice import QuadraticRational as Q
        za = _get_lattice("Z+aZ")
        ok = (coset_equal(za, [Q(3, 2)], [Q(0)])
              and not coset_equal(za, [Q(Fraction(1, 2))], [Q(0)])
              and coset_equal(za, [Q(Fraction(7, 3), 5)],
                              [Q(Fraction(7, 3), 5)]))
        return 0.0 if ok else 1.0

    checks.append(_timed(
        "quotient-exact-coset-arithmetic",
        "membership in the dense subgroup Z + sqrt(2) Z is decided exactly",
        0.0, exact_cosets))

    def heis_over_torus():
        sympl = get_omega("symplectic", torus)
        f = vanest_cocycle(torus, sympl, triangle_rule(7))
        fr = reduced_cocycle(f, _get_lattice("Z1"))
        ext = extend_group(torus, fr)
        want = structure_constants(get_group("heisenberg3")).structure
        got = structure_constants(ext, strict=False).structure
        gap = float(np.max(np.abs(got - want)))
        shifted = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0],
                   [1.0, 1.0, 1.0]]
        return max(gap, shift_invariance_check(ext, shifted, tol=np.inf))

    checks.append(_timed(
        "quotient-heisenberg-over-torus",
        "the reduced central extension of the torus keeps the Heisenberg "
        "algebra under shifts", 1e-8, heis_over_torus))
    return Report("quotients", seed, tuple(checks))


def suite_examples(seed: int, **_) -> Report:
    rng = np.random.default_rng(seed)
    checks = []

    def antisym():
        return max(abs(ek_cocycle(f, f))
                   for f in (random_loop(rng, 3) for _ in range(50)))

    checks.append(_timed(
        "ek-antisymmetry", "loop cocycle is antisymmetric", 1e-10, antisym))

    def oracle_gap():
        worst = 0.0
        for _ in range(20):
            f, g = random_loop(rng, 3), random_loop(rng, 3)
            worst = max(worst, abs(ek_cocycle(f, g)
                                   - ek_cocycle_oracle(f, g)))
        return worst

    checks.append(_timed(
        "ek-closed-form-vs-quadrature",
        "Fourier closed form equals the 4096-point circle quadrature",
        1e-9, oracle_gap))

    def identity():
        worst = 0.0
        for _ in range(50):
            f, g, h = (random_loop(rng, 2) for _ in range(3))
            worst = max(worst, abs(
                ek_cocycle(f.bracket(g), h) + ek_cocycle(g.bracket(h), f)
                + ek_cocycle(h.bracket(f), g)))
        return worst

    checks.append(_timed(
        "ek-cocycle-identity",
        "cyclic sum of the loop cocycle over brackets vanishes",
        1e-10, identity))

    checks.append(_timed(
        "ek-extended-jacobi",
        "Jacobi identity of the centrally extended loop bracket",
        1e-9, lambda: ek_extension_check(2, 100, rng)))

    def dl():
        q, spec = dl_quotient(2)
        dims_ok = (spec.parent.dim == 8 and q.dim == 7
                   and center_dimension(q) == 1)
        return max(0.0 if dims_ok else 1.0, q.jacobi_residual())

    checks.append(_timed(
        "dl-quotient-structure",
        "quotient by the irrational central line has dimension 7, "
        "one-dimensional center, and satisfies Jacobi", 1e-10, dl))
    return Report("examples-ek-dl", seed, tuple(checks))


SUITES = {
    "tangent-axioms": suite_tangent_axioms,
    "brackets": suite_brackets,
    "extensions": suite_extensions,
    "vanest": suite_vanest,
    "periods": suite_periods,
    "quotients": suite_quotients,
    "examples-ek-dl": suite_examples,
}

SUITE_NAMES = tuple(SUITES) + ("all",)


def run_suite(name: str, seed: int = 0, **kwargs) -> Report:
    if name == "all":
        return merge_reports(
            "all", seed,
            [SUITES[s](seed, **kwargs) for s in SUITES])
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return SUITES[name](seed, **kwargs)
