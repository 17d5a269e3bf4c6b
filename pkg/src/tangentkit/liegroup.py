"""Charted Lie groups and the two bracket constructions.

A charted group is a group germ written in a chart centered at the
identity (multiplication and inversion programs, identity at 0, and the
normalization that the chart derivative at 0 is the identity).  The
bracket is computed two ways: from the fiberwise difference of the two
second-order flows read through the vertical map, and from the mixed
second derivative of conjugation.  Both must agree, and for groups with a
matrix realization both must match the matrix commutator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ChartConsistencyError
from .jet import JetScalar, JetVector
from .program import CallableProgram, SmoothProgram, partial_tangent

SHAPE_TOL = 1e-8
BRACKET_TOL = 1e-10
JACOBI_TOL = 1e-8


@dataclass(frozen=True)
class ChartedGroup:
    """Group germ in an identity chart: mult is R^n x R^n -> R^n, inv R^n -> R^n."""

    name: str
    dim: int
    mult: SmoothProgram
    inv: SmoothProgram
    domain_radius: float
    oracle: Optional[tuple[np.ndarray, ...]] = None  # Lie algebra basis matrices
    periodic_lattice: Optional[str] = None  # catalog lattice name for quotients

    @property
    def sample_radius(self) -> float:
        return self.domain_radius / 4.0

    def validate(self, rng: np.random.Generator, samples: int = 25,
                 tol_id: float = 1e-12, tol_inv: float = 1e-10) -> None:
        """Check mult(x,0)=x, mult(0,y)=y, mult(x,inv x)=0 on sampled points."""
        n = self.dim
        zero = np.zeros(n)
        for _ in range(samples):
            x = rng.uniform(-1, 1, n) * self.sample_radius
            left = self.mult.eval_array(np.concatenate([x, zero]))
            right = self.mult.eval_array(np.concatenate([zero, x]))
            if np.max(np.abs(left - x)) > tol_id or np.max(np.abs(right - x)) > tol_id:
                raise ChartConsistencyError(f"{self.name}: identity axiom fails at {x}")
            ix = self.inv.eval_array(x)
            prod = self.mult.eval_array(np.concatenate([x, ix]))
            if np.max(np.abs(prod)) > tol_inv:
                raise ChartConsistencyError(f"{self.name}: inversion axiom fails at {x}")

    def conjugation(self) -> SmoothProgram:
        """(g, h) -> g h g^-1 as a program on 2n inputs.

        Delegates to the multiplication and inversion programs, so it
        stays evaluable even when those are quadrature-backed wrappers.
        """
        n = self.dim

        def build(v):
            g, h = v[:n], v[n:]
            gh = self.mult.eval(list(g) + list(h))
            gi = self.inv.eval(list(g))
            return self.mult.eval(list(gh) + list(gi))

        return CallableProgram(build, 2 * n, n, name=f"conj({self.name})")


@dataclass(frozen=True)
class LieAlgebraData:
    """Structure constants c[i, j, :] = coordinates of [e_i, e_j]."""

    dim: int
    structure: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.structure, dtype=float)
        if c.shape != (self.dim, self.dim, self.dim):
            raise ValueError("structure tensor must be (n, n, n)")
        if np.max(np.abs(c + np.swapaxes(c, 0, 1))) != 0.0:
            raise ValueError("structure tensor must be stored antisymmetrically")
        object.__setattr__(self, "structure", c)

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("ijk,i,j->k", self.structure, x, y)

    def jacobi_residual(self) -> float:
        c = self.structure
        # sum_m c[i,j,m] c[m,k,l] + cyclic in (i,j,k)
        t = np.einsum("ijm,mkl->ijkl", c, c)
        cyc = t + np.transpose(t, (1, 2, 0, 3)) + np.transpose(t, (2, 0, 1, 3))
        return float(np.max(np.abs(cyc)))

    def check_jacobi(self, tol: float = JACOBI_TOL) -> None:
        r = self.jacobi_residual()
        if r > tol:
            raise ChartConsistencyError(f"Jacobi residual {r:.3e} exceeds {tol:.1e}")


def left_invariant_field(G: ChartedGroup, v) -> SmoothProgram:
    """g -> the tangent at g extending v by left translation.

    Output layout is the flattened order-1 tangent (footprint, fiber).
    """
    v = np.asarray(v, dtype=float)
    n = G.dim
    t2m = partial_tangent(G.mult, (n, n), 2)

    class _Field(SmoothProgram):
        arity = n
        codim = 2 * n

        def eval(self, xs):
            return t2m.eval(list(xs) + [0.0] * n + list(v))

    return _Field()


def _mult_second_jet(G: ChartedGroup, outer, inner) -> JetVector:
    """m evaluated at (0 + outer*e2, 0 + inner*e1), as an order-2 jet vector."""
    n = G.dim
    g = [JetScalar(2, np.array([0.0, 0.0, outer[i], 0.0])) for i in range(n)]
    h = [JetScalar(2, np.array([0.0, inner[i], 0.0, 0.0])) for i in range(n)]
    out = G.mult.eval(g + h)
    return JetVector(tuple(
        y if isinstance(y, JetScalar) else JetScalar.constant(float(y), 2)
        for y in out
    ))


def _extract_vertical(jv: JetVector, expected_inner, shape_tol: float,
                      context: str) -> np.ndarray:
    """Check a second-order jet has shape (e, w, 0, b) and return b."""
    outer = jv.block((2,))
    if np.max(np.abs(outer)) > shape_tol:
        raise ChartConsistencyError(
            f"{context}: outer first-order block {np.max(np.abs(outer)):.3e} "
            f"exceeds {shape_tol:.1e}"
        )
    inner = jv.block((1,))
    gap = np.max(np.abs(inner - expected_inner))
    if gap > shape_tol:
        raise ChartConsistencyError(
            f"{context}: inner block deviates from the expected field value "
            f"by {gap:.3e}"
        )
    return jv.block((1, 2))


def bracket_delta(G: ChartedGroup, v, w, shape_tol: float = SHAPE_TOL) -> np.ndarray:
    """Bracket from the difference of the two composite flows at the identity.

    Forms Tw∘v - tau∘Tv∘w on the left-invariant extensions, checks the
    result is purely vertical over (e, w), and returns the mixed block.
    """
    from .jet import fiber_sub, flip

    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    term1 = _mult_second_jet(G, outer=v, inner=w)   # Tw ∘ v at e
    term2 = flip(_mult_second_jet(G, outer=w, inner=v), 1)  # tau ∘ Tv ∘ w
    delta = fiber_sub(term1, term2, tau=shape_tol)
    return _extract_vertical(delta, expected_inner=w, shape_tol=shape_tol,
                             context=f"{G.name}: delta bracket")


def bracket_conjugation(G: ChartedGroup, v, w,
                        shape_tol: float = SHAPE_TOL,
                        base_g=None, base_h=None,
                        conj: SmoothProgram | None = None,
                        strict: bool = True) -> np.ndarray:
    """Bracket as the mixed second derivative of conjugation at the identity.

    base_g / base_h translate the evaluation point; for lattice-periodic
    charts this must not change the result (quotient invariance).  At a
    shifted base the first-order blocks carry translation terms, so the
    pure-vertical shape check only applies at the identity; strict=False
    skips it and reads the mixed coefficient directly.
    """
    n = G.dim
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    g0 = np.zeros(n) if base_g is None else np.asarray(base_g, dtype=float)
    h0 = np.zeros(n) if base_h is None else np.asarray(base_h, dtype=float)
    c = conj if conj is not None else G.conjugation()
    g = [JetScalar(2, np.array([g0[i], 0.0, v[i], 0.0])) for i in range(n)]
    h = [JetScalar(2, np.array([h0[i], w[i], 0.0, 0.0])) for i in range(n)]
    out = c.eval(g + h)
    jv = JetVector(tuple(
        y if isinstance(y, JetScalar) else JetScalar.constant(float(y), 2)
        for y in out
    ))
    if not strict:
        return jv.block((1, 2))
    return _extract_vertical(jv, expected_inner=w, shape_tol=shape_tol,
                             context=f"{G.name}: conjugation bracket")


def structure_constants(G: ChartedGroup, shape_tol: float = SHAPE_TOL,
                        jacobi_tol: float = JACOBI_TOL,
                        base_g=None, base_h=None,
                        strict: bool = True) -> LieAlgebraData:
    """Brackets of all basis pairs via the conjugation Hessian."""
    n = G.dim
    eye = np.eye(n)
    conj = G.conjugation()
    c = np.zeros((n, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            b = bracket_conjugation(G, eye[i], eye[j], shape_tol=shape_tol,
                                    base_g=base_g, base_h=base_h, conj=conj,
                                    strict=strict)
            c[i, j] = b
            c[j, i] = -b
    data = LieAlgebraData(n, c)
    data.check_jacobi(jacobi_tol)
    return data


def oracle_bracket(G: ChartedGroup, v, w) -> np.ndarray:
    """Commutator of the matrix realization, in chart-basis coordinates."""
    if G.oracle is None:
        raise ValueError(f"{G.name} has no matrix oracle")
    mats = G.oracle
    mv = sum(float(a) * m for a, m in zip(v, mats))
    mw = sum(float(a) * m for a, m in zip(w, mats))
    comm = mv @ mw - mw @ mv
    basis = np.stack([np.concatenate([m.real.ravel(), m.imag.ravel()]) for m in mats])
    target = np.concatenate([comm.real.ravel(), comm.imag.ravel()])
    coords, residual, *_ = np.linalg.lstsq(basis.T, target, rcond=None)
    recon = basis.T @ coords
    if np.max(np.abs(recon - target)) > 1e-9:
        raise ChartConsistencyError(
            f"{G.name}: commutator leaves the span of the oracle basis"
        )
    return coords


def mixed_partial_check(f: SmoothProgram, split: tuple[int, int], v, w, base,
                        tol: float = 1e-10, pre_tol: float = 1e-9,
                        pre_samples: int = 8,
                        rng: np.random.Generator | None = None) -> bool:
    """Symmetry of the two mixed partial tangents for a map collapsing slices.

    Requires f(x0, .) and f(., y0) numerically constant near the base pair;
    then both iterated mixed tangents must agree and be purely vertical.
    """
    n1, n2 = split
    base = np.asarray(base, dtype=float)
    x0, y0 = base[:n1], base[n1:]
    f0 = f.eval_array(base)
    rng = rng if rng is not None else np.random.default_rng(0)
    for _ in range(pre_samples):
        xs = x0 + rng.uniform(-0.1, 0.1, n1)
        ys = y0 + rng.uniform(-0.1, 0.1, n2)
        if (np.max(np.abs(f.eval_array(np.concatenate([x0, ys])) - f0)) > pre_tol or
                np.max(np.abs(f.eval_array(np.concatenate([xs, y0])) - f0)) > pre_tol):
            raise ValueError("precondition violated: slices through the base "
                             "point are not constant")

    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)

    def mixed(outer_dir_x, inner_dir_y):
        xs = [JetScalar(2, np.array([x0[i], 0.0, outer_dir_x[i], 0.0]))
              for i in range(n1)]
        ys = [JetScalar(2, np.array([y0[i], inner_dir_y[i], 0.0, 0.0]))
              for i in range(n2)]
        out = f.eval(xs + ys)
        jv = JetVector(tuple(
            y if isinstance(y, JetScalar) else JetScalar.constant(float(y), 2)
            for y in out
        ))
        return jv

    a = mixed(v, w)            # T1 T2 f (v, w): x-direction outer
    # T2 T1 f (v, w): x-direction inner, y-direction outer
    xs = [JetScalar(2, np.array([x0[i], v[i], 0.0, 0.0])) for i in range(n1)]
    ys = [JetScalar(2, np.array([y0[i], 0.0, w[i], 0.0])) for i in range(n2)]
    out = f.eval(xs + ys)
    b = JetVector(tuple(
        y if isinstance(y, JetScalar) else JetScalar.constant(float(y), 2)
        for y in out
    ))
    for jv in (a, b):
        if max(np.max(np.abs(jv.block((1,)))), np.max(np.abs(jv.block((2,))))) > tol:
            raise ChartConsistencyError("mixed jet is not purely vertical")
    return bool(np.max(np.abs(a.block((1, 2)) - b.block((1, 2)))) <= tol)
