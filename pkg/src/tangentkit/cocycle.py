"""Group and Lie-algebra 2-cocycles, central extensions, and differentiation.

A group cocycle is a program f on pairs of chart points with values in
R^d, normalized so f(g, e) = f(e, h) = 0.  Its derivative L(f) is the
antisymmetrized mixed Hessian at the identity, an algebra 2-cocycle.
Differentiation intertwines the two central-extension constructions: the
Lie algebra of the f-extended group is the L(f)-extension of the Lie
algebra, and that identity is checked numerically here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ChartConsistencyError
from .jet import JetScalar, JetVector
from .liegroup import ChartedGroup, LieAlgebraData, structure_constants
from .program import CallableProgram, SmoothProgram, trace

NORMALIZATION_TOL = 1e-10
IDENTITY_TOL = 1e-8
DIFFERENTIATION_TOL = 1e-8


@dataclass(frozen=True)
class GroupCocycle:
    """f: G x G -> R^d in chart coordinates, normalized at the identity."""

    program: SmoothProgram
    group_dim: int
    target_dim: int
    radius: float
    name: str = ""

    def __post_init__(self):
        if self.program.arity != 2 * self.group_dim:
            raise ValueError("cocycle program must take two group points")
        if self.program.codim != self.target_dim:
            raise ValueError("cocycle program codim must match target_dim")

    def value(self, g, h) -> np.ndarray:
        return self.program.eval_array(np.concatenate([
            np.asarray(g, dtype=float), np.asarray(h, dtype=float)]))

    def check_normalization(self, rng: np.random.Generator,
                            samples: int = 200,
                            tol: float = NORMALIZATION_TOL) -> float:
        """max |f(g, e)|, |f(e, h)| over sampled g, h; raises beyond tol."""
        n = self.group_dim
        zero = np.zeros(n)
        worst = 0.0
        for _ in range(samples):
            g = rng.uniform(-1, 1, n) * (self.radius / 4.0)
            worst = max(worst,
                        float(np.max(np.abs(self.value(g, zero)))),
                        float(np.max(np.abs(self.value(zero, g)))))
        if worst > tol:
            raise ChartConsistencyError(
                f"cocycle {self.name!r} normalization residual {worst:.3e}")
        return worst


def cocycle_identity_residual(G: ChartedGroup, f: GroupCocycle,
                              rng: np.random.Generator,
                              samples: int = 200) -> float:
    """max residual of f(g,h) + f(gh,k) - f(h,k) - f(g,hk) on sampled triples."""
    n = G.dim
    r = min(G.sample_radius, f.radius / 4.0)
    worst = 0.0
    for _ in range(samples):
        g, h, k = (rng.uniform(-1, 1, n) * r for _ in range(3))
        gh = G.mult.eval_array(np.concatenate([g, h]))
        hk = G.mult.eval_array(np.concatenate([h, k]))
        res = (f.value(g, h) + f.value(gh, k)
               - f.value(h, k) - f.value(g, hk))
        worst = max(worst, float(np.max(np.abs(res))))
    return worst


def check_cocycle(G: ChartedGroup, f: GroupCocycle,
                  rng: np.random.Generator, samples: int = 200,
                  tol: float = IDENTITY_TOL) -> float:
    f.check_normalization(rng, samples=samples)
    worst = cocycle_identity_residual(G, f, rng, samples=samples)
    if worst > tol:
        raise ChartConsistencyError(
            f"cocycle {f.name!r} identity residual {worst:.3e} exceeds {tol:.1e}")
    return worst


@dataclass(frozen=True)
class AlgebraCocycle:
    """omega: g x g -> R^d as a tensor, omega(x, y)[a] = tensor[a, i, j] x_i y_j."""

    source_dim: int
    target_dim: int
    tensor: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = np.asarray(self.tensor, dtype=float)
        if t.shape != (self.target_dim, self.source_dim, self.source_dim):
            raise ValueError("cocycle tensor must be (d, n, n)")
        if np.max(np.abs(t + np.swapaxes(t, 1, 2))) > 1e-12:
            raise ValueError("cocycle tensor must be antisymmetric")
        object.__setattr__(self, "tensor", t)

    def value(self, x, y) -> np.ndarray:
        return np.einsum("aij,i,j->a", self.tensor, x, y)

    def identity_residual(self, algebra: LieAlgebraData) -> float:
        """max |omega([x,y],z) + omega([y,z],x) + omega([z,x],y)| on the basis."""
        c, t = algebra.structure, self.tensor
        # omega([e_i, e_j], e_k) = t[a, m, k] c[i, j, m]
        u = np.einsum("ijm,amk->aijk", c, t)
        cyc = u + np.transpose(u, (0, 2, 3, 1)) + np.transpose(u, (0, 3, 1, 2))
        return float(np.max(np.abs(cyc)))


def mixed_hessian(f: GroupCocycle, x, y) -> np.ndarray:
    """d2f(x, y): the mixed second derivative of f at (e, e).

    Seeds the first argument in the outer slot and the second in the
    inner slot, so this is the x-then-y iterated partial tangent read at
    the mixed coefficient.
    """
    n = f.group_dim
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    g = [JetScalar(2, np.array([0.0, 0.0, x[i], 0.0])) for i in range(n)]
    h = [JetScalar(2, np.array([0.0, y[i], 0.0, 0.0])) for i in range(n)]
    out = f.program.eval(g + h)
    jv = JetVector(tuple(
        v if isinstance(v, JetScalar) else JetScalar.constant(float(v), 2)
        for v in out))
    first_order = max(float(np.max(np.abs(jv.block((1,))))),
                      float(np.max(np.abs(jv.block((2,))))))
    if first_order > 1e-8:
        raise ChartConsistencyError(
            "mixed jet has a nonvanishing first-order block: the cocycle "
            "is not normalized at the identity")
    return jv.block((1, 2))


def differentiate_cocycle(f: GroupCocycle) -> AlgebraCocycle:
    """L(f)(x, y) = d2f(x, y) - d2f(y, x), assembled on the basis."""
    n, d = f.group_dim, f.target_dim
    eye = np.eye(n)
    hess = np.zeros((d, n, n))
    for i in range(n):
        for j in range(n):
            hess[:, i, j] = mixed_hessian(f, eye[i], eye[j])
    tensor = hess - np.swapaxes(hess, 1, 2)
    return AlgebraCocycle(n, d, tensor)


def extend_group(G: ChartedGroup, f: GroupCocycle) -> ChartedGroup:
    """Central extension: (g, a)(h, b) = (gh, a + b + f(g, h)).

    The multiplication calls back into G.mult and f, so it is a wrapper
    program rather than a closed DAG; it still evaluates over jets.
    """
    n, d = G.dim, f.target_dim
    m = n + d

    def mult(xs):
        g, a = xs[:n], xs[n:m]
        h, b = xs[m:m + n], xs[m + n:]
        gh = G.mult.eval(list(g) + list(h))
        fv = f.program.eval(list(g) + list(h))
        return list(gh) + [ai + bi + fi for ai, bi, fi in zip(a, b, fv)]

    def inv(xs):
        g, a = xs[:n], xs[n:]
        gi = G.inv.eval(list(g))
        fv = f.program.eval(list(g) + list(gi))
        return list(gi) + [-ai - fi for ai, fi in zip(a, fv)]

    return ChartedGroup(
        name=f"{G.name}*{f.name or 'f'}",
        dim=m,
        mult=CallableProgram(mult, 2 * m, m, name="extended-mult"),
        inv=CallableProgram(inv, m, m, name="extended-inv"),
        domain_radius=min(G.domain_radius, f.radius) / 2.0,
    )


def extend_algebra(algebra: LieAlgebraData,
                   omega: AlgebraCocycle) -> LieAlgebraData:
    """Central extension: [(x, a), (y, b)] = ([x, y], omega(x, y))."""
    if omega.source_dim != algebra.dim:
        raise ValueError("cocycle source dimension must match the algebra")
    n, d = algebra.dim, omega.target_dim
    m = n + d
    c = np.zeros((m, m, m))
    c[:n, :n, :n] = algebra.structure
    c[:n, :n, n:] = np.moveaxis(omega.tensor, 0, 2)
    return LieAlgebraData(m, c)


def coboundary_of(G: ChartedGroup, h: SmoothProgram,
                  name: str = "") -> GroupCocycle:
    """The trivializable cocycle f(g1, g2) = h(g1 g2) - h(g1) - h(g2).

    h(0) is subtracted first so the result is normalized even when h does
    not vanish at the identity.
    """
    if h.arity != G.dim:
        raise ValueError("potential must be a function on the group chart")
    n, d = G.dim, h.codim
    h0 = h.eval_array(np.zeros(n))

    def build(v):
        g1, g2 = v[:n], v[n:]
        prod = G.mult.eval(list(g1) + list(g2))
        top = h.eval(list(prod))
        left = h.eval(list(g1))
        right = h.eval(list(g2))
        return [t - a - b + h0[i] for i, (t, a, b) in
                enumerate(zip(top, left, right))]

    return GroupCocycle(trace(build, 2 * n), n, d, G.domain_radius,
                        name=name or "coboundary")


def verify_extension_differentiation(G: ChartedGroup, f: GroupCocycle,
                                     tol: float = DIFFERENTIATION_TOL) -> float:
    """Structure constants of the f-extension vs the L(f)-extension.

    Returns the max deviation; raises beyond tol.
    """
    ext = extend_group(G, f)
    got = structure_constants(ext)
    want = extend_algebra(structure_constants(G), differentiate_cocycle(f))
    gap = float(np.max(np.abs(got.structure - want.structure)))
    if gap > tol:
        raise ChartConsistencyError(
            f"extension differentiation gap {gap:.3e} exceeds {tol:.1e}")
    return gap
