"""Desk-scale loop-algebra and quotient-algebra examples.

The loop example: trigonometric-polynomial maps S^1 -> su(2), closed
under the pointwise bracket without truncation, with the central-charge
cocycle omega(f, g) = integral of trace(f(t) g'(t)) dt evaluated in
closed form from Fourier coefficients.

The quotient example: u(n) x u(n) modulo the central line spanned by
(i*1, i*theta*1) for the symbolically irrational theta = sqrt(2); the
quotient is a Lie algebra with one-dimensional center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .lattice import QuadraticRational
from .liegroup import LieAlgebraData

REALITY_TOL = 1e-12


# -- the loop algebra ----------------------------------------------------------

@dataclass(frozen=True)
class FourierLoopElement:
    """f(t) = sum_n c_n exp(2 pi i n t) with c_n in C^3, c_{-n} = conj(c_n).

    The three components are the coordinates in the su(2) basis
    B_k = -(i/2) sigma_k; the reality constraint makes them real-valued
    functions, so f is genuinely su(2)-valued.
    """

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for n, c in self.coeffs.items():
            c = np.asarray(c, dtype=complex)
            if c.shape != (3,):
                raise ValueError("each coefficient must be a 3-vector")
            if np.max(np.abs(c)) > 0.0:
                clean[int(n)] = c
        for n, c in clean.items():
            other = clean.get(-n)
            gap = np.max(np.abs(c - (np.conj(other) if other is not None
                                     else 0.0)))
            if gap > REALITY_TOL:
                raise ValueError(
                    f"reality constraint c_-n = conj(c_n) fails at n={n}")
        object.__setattr__(self, "coeffs", clean)

    @staticmethod
    def from_positive(half: dict) -> "FourierLoopElement":
        """Build from frequencies n >= 0 only; negative ones are conjugated."""
        coeffs = {}
        for n, c in half.items():
            n = int(n)
            if n < 0:
                raise ValueError("from_positive takes frequencies n >= 0")
            c = np.asarray(c, dtype=complex)
            if n == 0:
                coeffs[0] = c.real.astype(complex)
            else:
                coeffs[n] = c
                coeffs[-n] = np.conj(c)
        return FourierLoopElement(coeffs)

    @property
    def degree(self) -> int:
        return max((abs(n) for n in self.coeffs), default=0)

    def __add__(self, other):
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out.get(n, 0.0) + c
        return FourierLoopElement(out)

    def scale(self, t: float) -> "FourierLoopElement":
        return FourierLoopElement({n: t * c for n, c in self.coeffs.items()})

    def bracket(self, other: "FourierLoopElement") -> "FourierLoopElement":
        """Pointwise su(2) bracket = componentwise cross product, by convolution."""
        out = {}
        for n, c in self.coeffs.items():
            for m, d in other.coeffs.items():
                out[n + m] = out.get(n + m, 0.0) + np.cross(c, d)
        return FourierLoopElement(out)

    def value_at(self, t: float) -> np.ndarray:
        """Real su(2)-coordinates of f(t)."""
        z = sum((c * np.exp(2j * math.pi * n * t)
                 for n, c in self.coeffs.items()), np.zeros(3, dtype=complex))
        return z.real

    def derivative_at(self, t: float) -> np.ndarray:
        z = sum((c * (2j * math.pi * n) * np.exp(2j * math.pi * n * t)
                 for n, c in self.coeffs.items()), np.zeros(3, dtype=complex))
        return z.real

    def norm(self) -> float:
        return max((float(np.max(np.abs(c))) for c in self.coeffs.values()),
                   default=0.0)


def ek_cocycle(f: FourierLoopElement, g: FourierLoopElement) -> float:
    """omega(f, g) = integral over the circle of trace(f(t) g'(t)) dt.

    With trace(B_i B_j) = -delta_ij / 2 the closed form in Fourier
    coefficients is -pi i sum_m m (c_{-m} . d_m); the reality constraint
    makes the value real.
    """
    acc = 0.0 + 0.0j
    for m, d in g.coeffs.items():
        c = f.coeffs.get(-m)
        if m != 0 and c is not None:
            acc += m * np.dot(c, d)
    val = -math.pi * 1j * acc
    if abs(val.imag) > 1e-9 * max(1.0, abs(val.real)):
        raise ValueError("cocycle value failed to be real")
    return float(val.real)


def ek_cocycle_oracle(f: FourierLoopElement, g: FourierLoopElement,
                      points: int = 4096) -> float:
    """Trapezoidal quadrature of trace(f g') on the circle (periodic)."""
    ts = np.arange(points) / points
    vals = [-0.5 * float(np.dot(f.value_at(t), g.derivative_at(t)))
            for t in ts]
    return float(np.mean(vals))


def random_loop(rng: np.random.Generator, degree: int,
                scale: float = 1.0) -> FourierLoopElement:
    half = {0: rng.standard_normal(3) * scale}
    for n in range(1, degree + 1):
        half[n] = (rng.standard_normal(3)
                   + 1j * rng.standard_normal(3)) * scale
    return FourierLoopElement.from_positive(half)


def extended_jacobi_residual(f, g, h) -> float:
    """Jacobi defect of the bracket ([x, y], omega(x, y)) on one triple."""
    loop = (f.bracket(g).bracket(h) + g.bracket(h).bracket(f)
            + h.bracket(f).bracket(g))
    central = (ek_cocycle(f.bracket(g), h) + ek_cocycle(g.bracket(h), f)
               + ek_cocycle(h.bracket(f), g))
    return max(loop.norm(), abs(central))


def ek_extension_check(N: int, samples: int,
                       rng: np.random.Generator | None = None) -> float:
    """Max extended-Jacobi residual over random degree <= N triples."""
    if N < 0:
        raise ValueError("max frequency must be nonnegative")
    rng = rng if rng is not None else np.random.default_rng(0)
    worst = 0.0
    for _ in range(samples):
        f, g, h = (random_loop(rng, N) for _ in range(3))
        worst = max(worst, extended_jacobi_residual(f, g, h))
    return worst


# -- the quotient algebra ---------------------------------------------------------

def _u_basis(n: int):
    """Anti-hermitian n x n basis: i E_kk, (E_kl - E_lk), i (E_kl + E_lk)."""
    out = []
    for k in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[k, k] = 1j
        out.append(m)
    for k in range(n):
        for l in range(k + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[k, l], m[l, k] = 1.0, -1.0
            out.append(m)
            m = np.zeros((n, n), dtype=complex)
            m[k, l], m[l, k] = 1j, 1j
            out.append(m)
    return out


def _structure_from_matrices(mats) -> np.ndarray:
    """Integer structure constants of a matrix basis (entries snap exactly)."""
    d = len(mats)
    flat = np.stack([np.concatenate([m.real.ravel(), m.imag.ravel()])
                     for m in mats])
    c = np.zeros((d, d, d))
    for i in range(d):
        for j in range(i + 1, d):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            target = np.concatenate([comm.real.ravel(), comm.imag.ravel()])
            coords, *_ = np.linalg.lstsq(flat.T, target, rcond=None)
            if np.max(np.abs(flat.T @ coords - target)) > 1e-10:
                raise ValueError("commutator left the span of the basis")
            snapped = np.round(coords)
            if np.max(np.abs(coords - snapped)) > 1e-10:
                raise ValueError("structure constants failed to be integers")
            c[i, j] = snapped
            c[j, i] = -snapped
    return c


@dataclass(frozen=True)
class QuotientAlgebraSpec:
    """A parent algebra, a central line with Q(sqrt 2) coordinates, and a
    complement basis (the remaining parent coordinates)."""

    parent: LieAlgebraData
    ideal_exact: tuple            # QuadraticRational coords of the generator
    pivot: int                    # parent coordinate eliminated by the quotient

    def __post_init__(self):
        v = tuple(QuadraticRational(Fraction(0)) + c for c in self.ideal_exact)
        if len(v) != self.parent.dim:
            raise ValueError("ideal vector has the wrong dimension")
        if v[self.pivot] != 1:
            raise ValueError("pivot coordinate of the ideal must be 1")
        object.__setattr__(self, "ideal_exact", v)
        self._check_central_exact()

    def _check_central_exact(self) -> None:
        # The parent constants are integers, the ideal has Q(sqrt 2)
        # coordinates: centrality sum_i v_i c[i, j, k] = 0 is decided exactly.
        c = self.parent.structure
        ints = np.round(c)
        if np.max(np.abs(c - ints)) > 0.0:
            raise ValueError("exact centrality needs integer parent constants")
        for j in range(self.parent.dim):
            for k in range(self.parent.dim):
                acc = QuadraticRational(Fraction(0))
                for i in range(self.parent.dim):
                    if ints[i, j, k] != 0.0:
                        acc = acc + self.ideal_exact[i] * int(ints[i, j, k])
                if acc != 0:
                    raise ValueError("ideal generator is not central")

    def quotient(self) -> LieAlgebraData:
        """Structure constants on the complement, eliminating the pivot.

        Modulo the ideal, e_pivot = -sum_{i != pivot} v_i e_i; substituting
        into the parent brackets keeps the complement closed.
        """
        d, p = self.parent.dim, self.pivot
        keep = [i for i in range(d) if i != p]
        v = np.array([float(x) for x in self.ideal_exact])
        c = self.parent.structure
        # Brackets of complement vectors, then push the pivot coordinate
        # back onto the complement.
        sub = c[np.ix_(keep, keep)]          # (d-1, d-1, d)
        pivot_part = sub[:, :, p]
        out = sub[:, :, keep].copy()
        for idx, i in enumerate(keep):
            out[:, :, idx] -= pivot_part * v[i]
        return LieAlgebraData(d - 1, out)


def center_dimension(algebra: LieAlgebraData, tol: float = 1e-9) -> int:
    """dim ker(ad): x central iff c[i, j, k] x_i = 0 for all j, k."""
    d = algebra.dim
    mat = algebra.structure.reshape(d, d * d)
    return d - int(np.linalg.matrix_rank(mat, tol=tol))


def dl_quotient(n: int, theta: QuadraticRational | None = None):
    """(u(n) x u(n)) / the central line (i*1, i*theta*1).

    Returns (quotient, spec).  theta defaults to sqrt(2) exactly.
    """
    if n not in (1, 2):
        raise ValueError("desk scale supports n = 1 or 2")
    if theta is None:
        theta = QuadraticRational(Fraction(0), Fraction(1))
    basis = _u_basis(n)
    d1 = len(basis)
    zero = np.zeros((n, n), dtype=complex)
    mats = ([np.block([[m, zero], [zero, zero]]) for m in basis]
            + [np.block([[zero, zero], [zero, m]]) for m in basis])
    parent = LieAlgebraData(2 * d1, _structure_from_matrices(mats))
    # i*1 = sum of the first n diagonal basis elements in each factor.
    one = QuadraticRational(Fraction(1))
    zero_q = QuadraticRational(Fraction(0))
    ideal = [zero_q] * (2 * d1)
    for k in range(n):
        ideal[k] = one
        ideal[d1 + k] = theta
    spec = QuotientAlgebraSpec(parent, tuple(ideal), pivot=0)
    return spec.quotient(), spec
