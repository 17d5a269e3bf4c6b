"""Simplex integration of algebra 2-cocycles and period homomorphisms.

Given a charted group G and an antisymmetric bilinear form omega on its
Lie algebra, the left-invariant two-form omega^l is integrated over the
singular simplex

    gamma_{x,y}(t, s) = t (x * (s y)) + s (x * ((1 - t) y))

to produce f0(x, y).  f0 has mixed second derivative omega / 2 at the
identity, and as a group cocycle differentiates back to omega.  The same
pullback quadrature over [0,1]^2 evaluates period integrals of omega^l
over explicit two-cycles.

Everything here is ring-generic: quadrature is a finite linear
combination, so running jets through the sum computes derivatives of the
integral exactly (up to the rule's own error).  The left-translation
inverse theta(z) is obtained by a jet-derived Jacobian and a pivot-free
adjugate solve, which keeps the solve valid over the jet ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ChartConsistencyError, DomainError
from .cocycle import AlgebraCocycle, GroupCocycle
from .jet import K_MAX, JetScalar
from .liegroup import ChartedGroup
from .program import CallableProgram, SmoothProgram, trace

EXACTNESS_TOL = 1e-12
EDGE_TOL = 1e-10


# -- quadrature ----------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights on the unit square or the standard 2-simplex."""

    domain: str  # "square" or "triangle"
    degree: int
    nodes: np.ndarray = field(repr=False)    # (m, 2)
    weights: np.ndarray = field(repr=False)  # (m,)

    def __post_init__(self):
        if self.domain not in ("square", "triangle"):
            raise ValueError("domain must be 'square' or 'triangle'")
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        self.verify_exactness()

    def reference_measure(self) -> float:
        return 1.0 if self.domain == "square" else 0.5

    def _exact_monomial(self, p: int, q: int) -> float:
        if self.domain == "square":
            return 1.0 / ((p + 1) * (q + 1))
        return (math.factorial(p) * math.factorial(q)
                / math.factorial(p + q + 2))

    def verify_exactness(self, tol: float = EXACTNESS_TOL) -> float:
        t, s = self.nodes[:, 0], self.nodes[:, 1]
        worst = 0.0
        for p in range(self.degree + 1):
            for q in range(self.degree + 1 - p):
                got = float(np.dot(self.weights, t**p * s**q))
                worst = max(worst, abs(got - self._exact_monomial(p, q)))
        if worst > tol:
            raise ValueError(
                f"rule fails declared degree {self.degree}: residual {worst:.3e}")
        return worst


def _gauss01(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


def square_rule(degree: int) -> QuadratureRule:
    """Product Gauss-Legendre rule on [0,1]^2, exact to total degree."""
    n = (degree + 2) // 2
    x, w = _gauss01(n)
    t, s = np.meshgrid(x, x, indexing="ij")
    wt = np.outer(w, w)
    return QuadratureRule("square", degree,
                          np.column_stack([t.ravel(), s.ravel()]), wt.ravel())


def triangle_rule(degree: int) -> QuadratureRule:
    """Duffy-transformed product rule on {t, s >= 0, t + s <= 1}.

    t = a, s = b (1 - a) with Jacobian (1 - a); the extra factor raises
    the needed one-dimensional degree by one.
    """
    n = (degree + 3) // 2
    a, wa = _gauss01(n)
    b, wb = _gauss01(n)
    ts, ws = [], []
    for i in range(n):
        for j in range(n):
            ts.append((a[i], b[j] * (1.0 - a[i])))
            ws.append(wa[i] * wb[j] * (1.0 - a[i]))
    return QuadratureRule("triangle", degree, np.array(ts), np.array(ws))


# -- left-invariant forms and the translation solve ------------------------------

@dataclass(frozen=True)
class LeftInvariantTwoForm:
    """omega^l: the G-invariant a-valued two-form with omega^l(e) = omega."""

    base: AlgebraCocycle
    group: ChartedGroup

    def __post_init__(self):
        if self.base.source_dim != self.group.dim:
            raise ValueError("form dimension must match the group chart")


def _pad_all(xs, order):
    out = []
    for x in xs:
        if isinstance(x, JetScalar):
            out.append(x.pad(order))
        else:
            out.append(JetScalar.constant(float(x), order))
    return out


def _ring_order(xs) -> int:
    order = 0
    for x in xs:
        if isinstance(x, JetScalar):
            if order and x.order != order:
                raise ValueError("jet inputs must share one order")
            order = x.order
    return order


def _top_split(c, k):
    """Split an order-(k+1) scalar into its slot-(k+1) base and fiber parts."""
    if not isinstance(c, JetScalar):
        base = float(c)
        return (base, 0.0) if k == 0 else (
            JetScalar.constant(base, k), JetScalar.constant(0.0, k))
    half = 1 << k
    coeffs = c.pad(k + 1).coeffs
    if k == 0:
        return float(coeffs[0]), float(coeffs[1])
    return JetScalar(k, coeffs[:half].copy()), JetScalar(k, coeffs[half:].copy())


def _base_magnitude(x) -> float:
    return abs(x.base) if isinstance(x, JetScalar) else abs(float(x))


def _adjugate_solve(a, rhs_list):
    """Solve A x = u for each u, by adjugate over a commutative ring; n <= 3."""
    n = len(a)
    if n == 1:
        det = a[0][0]
        adj = [[1.0]]
    elif n == 2:
        det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
        adj = [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
    elif n == 3:
        c00 = a[1][1] * a[2][2] - a[1][2] * a[2][1]
        c01 = a[1][2] * a[2][0] - a[1][0] * a[2][2]
        c02 = a[1][0] * a[2][1] - a[1][1] * a[2][0]
        det = a[0][0] * c00 + a[0][1] * c01 + a[0][2] * c02
        adj = [
            [c00, a[0][2] * a[2][1] - a[0][1] * a[2][2],
             a[0][1] * a[1][2] - a[0][2] * a[1][1]],
            [c01, a[0][0] * a[2][2] - a[0][2] * a[2][0],
             a[0][2] * a[1][0] - a[0][0] * a[1][2]],
            [c02, a[0][1] * a[2][0] - a[0][0] * a[2][1],
             a[0][0] * a[1][1] - a[0][1] * a[1][0]],
        ]
    else:
        raise ValueError("adjugate solve supports chart dimension <= 3")
    if _base_magnitude(det) < 1e-12:
        raise ChartConsistencyError(
            "singular translation Jacobian: chart left its validity ball")
    out = []
    for u in rhs_list:
        out.append([sum(adj[i][j] * u[j] for j in range(n)) / det
                    for i in range(n)])
    return out


def _translation_jacobian(G: ChartedGroup, z):
    """Entries of D2 m(z, .)|0 over the ring of the entries of z."""
    n = G.dim
    k = _ring_order(z)
    if k + 1 > K_MAX:
        raise ValueError("translation Jacobian exceeds the supported jet order")
    zp = _pad_all(z, k + 1)
    cols = []
    for j in range(n):
        h = [JetScalar.variable(0.0, k + 1, k + 1) if i == j
             else JetScalar.constant(0.0, k + 1) for i in range(n)]
        out = G.mult.eval(zp + h)
        cols.append([_top_split(c, k)[1] for c in out])
    return [[cols[j][i] for j in range(n)] for i in range(n)]  # a[i][j]


def theta_apply(G: ChartedGroup, z, vectors):
    """theta(z) v = (D2 m(z,.)|0)^{-1} v for each v, ring-generically."""
    return _adjugate_solve(_translation_jacobian(G, z), vectors)


def _form_value(omega: AlgebraCocycle, u, v):
    """omega(u, v) componentwise; entries of u, v live in one ring."""
    t = omega.tensor
    out = []
    for a in range(omega.target_dim):
        acc = 0.0
        for i in range(omega.source_dim):
            for j in range(omega.source_dim):
                if t[a, i, j] != 0.0:
                    acc = acc + t[a, i, j] * (u[i] * v[j])
        out.append(acc)
    return out


def form_at(wl: LeftInvariantTwoForm, z, a1, a2) -> np.ndarray:
    """omega^l at the chart point z on tangent vectors a1, a2."""
    z = [float(c) for c in np.asarray(z, dtype=float)]
    a1 = [float(c) for c in np.asarray(a1, dtype=float)]
    a2 = [float(c) for c in np.asarray(a2, dtype=float)]
    u, v = theta_apply(wl.group, z, [a1, a2])
    return np.array([float(c) for c in _form_value(wl.base, u, v)])


# -- the simplex cocycle ---------------------------------------------------------

def _gamma_eval(G: ChartedGroup, t, s, x, y):
    """t (x * (s y)) + s (x * ((1 - t) y)); all arguments in one ring."""
    n = G.dim
    one_minus_t = 1.0 - t
    p1 = G.mult.eval(list(x) + [s * yi for yi in y])
    p2 = G.mult.eval(list(x) + [one_minus_t * yi for yi in y])
    return [t * p1[i] + s * p2[i] for i in range(n)]


def gamma_map(G: ChartedGroup, x, y) -> SmoothProgram:
    """The simplex filling as a program (t, s) -> chart point."""
    x = [float(c) for c in np.asarray(x, dtype=float)]
    y = [float(c) for c in np.asarray(y, dtype=float)]
    return trace(lambda v: _gamma_eval(G, v[0], v[1], x, y), 2)


def _check_simplex_domain(G: ChartedGroup, x, y) -> None:
    for t, s in ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.5, 0.5),
                 (0.25, 0.25), (0.75, 0.25), (0.25, 0.75)):
        z = _gamma_eval(G, t, s, x, y)
        r = math.sqrt(sum(float(c) ** 2 for c in z))
        if r > G.domain_radius:
            raise DomainError(
                f"{G.name}: simplex leaves the chart ball (|gamma| = {r:.3f})")


def integrate_f0(G: ChartedGroup, omega: AlgebraCocycle, x, y,
                 rule: QuadratureRule):
    """f0(x, y) = integral of omega^l over the simplex gamma_{x,y}.

    x and y may carry jets; the quadrature sum is evaluated in their ring,
    so derivatives of f0 come out of the same call.
    """
    if rule.domain != "triangle":
        raise ValueError("integrate_f0 needs a triangle rule")
    n, d = G.dim, omega.target_dim
    x, y = list(x), list(y)
    k = _ring_order(x + y)
    if k + 1 > K_MAX:
        raise ValueError("f0 differentiation exceeds the supported jet order")
    if k == 0:
        x = [float(c) for c in x]
        y = [float(c) for c in y]
        _check_simplex_domain(G, x, y)
    else:
        x = _pad_all(x, k)
        y = _pad_all(y, k)
        _check_simplex_domain(G, [c.base for c in x], [c.base for c in y])
    xp = _pad_all(x, k + 1)
    yp = _pad_all(y, k + 1)

    acc = [0.0] * d
    for (t, s), w in zip(rule.nodes, rule.weights):
        t_seed = JetScalar.variable(t, k + 1, k + 1)
        s_seed = JetScalar.variable(s, k + 1, k + 1)
        s_const = JetScalar.constant(s, k + 1)
        t_const = JetScalar.constant(t, k + 1)
        out_t = _gamma_eval(G, t_seed, s_const, xp, yp)
        out_s = _gamma_eval(G, t_const, s_seed, xp, yp)
        z, dt = zip(*(_top_split(c, k) for c in out_t))
        _, ds = zip(*(_top_split(c, k) for c in out_s))
        u, v = _adjugate_solve(_translation_jacobian(G, list(z)),
                               [list(dt), list(ds)])
        val = _form_value(omega, u, v)
        acc = [acc[a] + w * val[a] for a in range(d)]
    if k == 0:
        return np.array([float(c) for c in acc])
    return acc


def check_d2(G: ChartedGroup, omega: AlgebraCocycle, rule: QuadratureRule,
             tol: float) -> float:
    """Residual of d2 f0 = omega / 2 at the identity, over all basis pairs."""
    n, d = G.dim, omega.target_dim
    got = np.zeros((d, n, n))
    for i in range(n):
        for j in range(n):
            x = [JetScalar(2, np.array([0.0, 0.0, float(i == m), 0.0]))
                 for m in range(n)]
            y = [JetScalar(2, np.array([0.0, float(j == m), 0.0, 0.0]))
                 for m in range(n)]
            out = integrate_f0(G, omega, x, y, rule)
            got[:, i, j] = [c.coefficient((1, 2)) for c in out]
    gap = float(np.max(np.abs(got - 0.5 * omega.tensor)))
    if gap > tol:
        raise ChartConsistencyError(
            f"d2 f0 deviates from omega/2 by {gap:.3e} (> {tol:.1e})")
    return gap


def vanest_cocycle(G: ChartedGroup, omega: AlgebraCocycle,
                   rule: QuadratureRule) -> GroupCocycle:
    """f0 wrapped as a GroupCocycle on a shrunken ball of the chart."""
    n, d = G.dim, omega.target_dim

    def fn(xs):
        return list(integrate_f0(G, omega, xs[:n], xs[n:], rule))

    return GroupCocycle(
        CallableProgram(fn, 2 * n, d, name="vanest"),
        n, d, G.domain_radius / 2.0,
        name=f"vanest({G.name})")


# -- period homomorphism ----------------------------------------------------------

@dataclass(frozen=True)
class TwoCycle:
    """A singular square in the chart with declared edge identifications.

    edge_shifts = (shift_t, shift_s) asserts map(1, s) - map(0, s) = shift_t
    and map(t, 1) - map(t, 0) = shift_s, so the square closes up in the
    lattice quotient.  None means the corresponding edges coincide.
    """

    map: SmoothProgram
    edge_shifts: tuple = (None, None)

    def __post_init__(self):
        if self.map.arity != 2:
            raise ValueError("a two-cycle is parametrized by (t, s)")

    def check_identifications(self, samples: int = 17,
                              tol: float = EDGE_TOL) -> float:
        worst = 0.0
        shift_t, shift_s = self.edge_shifts
        st = np.zeros(self.map.codim) if shift_t is None else np.asarray(shift_t)
        ss = np.zeros(self.map.codim) if shift_s is None else np.asarray(shift_s)
        for u in np.linspace(0.0, 1.0, samples):
            gap_t = self.map.eval_array([1.0, u]) - self.map.eval_array([0.0, u]) - st
            gap_s = self.map.eval_array([u, 1.0]) - self.map.eval_array([u, 0.0]) - ss
            worst = max(worst, float(np.max(np.abs(gap_t))),
                        float(np.max(np.abs(gap_s))))
        if worst > tol:
            raise ChartConsistencyError(
                f"declared edge identifications fail by {worst:.3e}")
        return worst


def fundamental_cycle(dim: int = 2) -> TwoCycle:
    """(t, s) -> (t, s, 0, ..): the fundamental torus cycle in a flat chart."""
    cyc = trace(lambda v: [v[0], v[1]] + [0.0 * v[0]] * (dim - 2), 2)
    shift_t = np.zeros(dim); shift_t[0] = 1.0
    shift_s = np.zeros(dim); shift_s[1] = 1.0
    return TwoCycle(cyc, (shift_t, shift_s))


def period(G: ChartedGroup, omega: AlgebraCocycle, sigma: TwoCycle,
           rule: QuadratureRule) -> np.ndarray:
    """Quadrature of the pullback of omega^l along sigma over [0,1]^2."""
    if rule.domain != "square":
        raise ValueError("period needs a square rule")
    if sigma.map.codim != G.dim:
        raise ValueError("cycle lands in the wrong chart")
    sigma.check_identifications()
    d = omega.target_dim
    acc = np.zeros(d)
    for (t, s), w in zip(rule.nodes, rule.weights):
        out_t = sigma.map.eval([JetScalar.variable(t, 1, 1),
                                JetScalar.constant(s, 1)])
        out_s = sigma.map.eval([JetScalar.constant(t, 1),
                                JetScalar.variable(s, 1, 1)])
        z, dt = zip(*(_top_split(c, 0) for c in out_t))
        _, ds = zip(*(_top_split(c, 0) for c in out_s))
        u, v = _adjugate_solve(_translation_jacobian(G, list(z)),
                               [list(dt), list(ds)])
        acc += w * np.array([float(c) for c in _form_value(omega, u, v)])
    return acc
