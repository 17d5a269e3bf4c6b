"""Finitely generated period subgroups of R^d and coset arithmetic.

A finitely generated subgroup of R^d is discrete exactly when its
generators have equal rank over Q and over R.  Discreteness and dense
coset membership are therefore decided exactly when the generators carry
exact coordinates (rationals plus rational multiples of one fixed
irrational, alpha = sqrt(2)); with plain floats the R-dependent case is
reported as an explicit unknown rather than guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .jet import JetScalar
from .liegroup import ChartedGroup, structure_constants

ALPHA = math.sqrt(2.0)
RANK_TOL = 1e-9
SNAP_TOL = 1e-9


@dataclass(frozen=True)
class QuadraticRational:
    """a + b*sqrt(2) with rational a, b: exact arithmetic in Q(sqrt 2)."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def __add__(self, other):
        other = _as_quadratic(other)
        return QuadraticRational(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticRational(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-_as_quadratic(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_quadratic(other)
        return QuadraticRational(self.a * other.a + 2 * self.b * other.b,
                                 self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticRational":
        norm = self.a * self.a - 2 * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("zero element of Q(sqrt 2)")
        return QuadraticRational(self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        return self * _as_quadratic(other).inverse()

    def __eq__(self, other):
        other = _as_quadratic(other)
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_integer(self) -> bool:
        return self.b == 0 and self.a.denominator == 1

    def __float__(self):
        return float(self.a) + float(self.b) * ALPHA

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt2)"


def _as_quadratic(x) -> QuadraticRational:
    if isinstance(x, QuadraticRational):
        return x
    if isinstance(x, (int, Fraction)):
        return QuadraticRational(Fraction(x))
    raise TypeError(f"cannot coerce {x!r} into Q(sqrt 2)")


def _rank_exact(rows) -> int:
    """Row rank by Gaussian elimination; entries support exact field ops."""
    rows = [list(r) for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / pr[c]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        rank += 1
    return rank


def _solve_exact(mat, rhs):
    """Unique exact solution of mat x = rhs over Q, or None if inconsistent.

    Raises on underdetermined systems (free variables), which do not occur
    for the catalog lattices.
    """
    m = [list(row) + [r] for row, r in zip(mat, rhs)]
    ncols = len(mat[0])
    pivots = []
    rank = 0
    for c in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pr = m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / pr[c]
                m[i] = [x - f * y for x, y in zip(m[i], pr)]
        pivots.append(c)
        rank += 1
    for i in range(rank, len(m)):
        if m[i][-1] != 0:
            return None  # inconsistent
    if rank < ncols:
        raise ValueError("membership system is underdetermined")
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = m[r][-1] / m[r][c]
    return x


@dataclass(frozen=True)
class Lattice:
    """Subgroup of R^d generated by the rows of `generators`.

    exact_coords, when present, gives each generator entry as an element
    of Q(sqrt 2), and all membership decisions become exact.
    """

    ambient_dim: int
    generators: np.ndarray
    exact_coords: Optional[tuple] = None  # tuple of tuples of QuadraticRational
    name: str = ""

    def __post_init__(self):
        g = np.atleast_2d(np.asarray(self.generators, dtype=float))
        if g.shape[1] != self.ambient_dim:
            raise ValueError("generator length must match the ambient dimension")
        if np.any(np.all(g == 0.0, axis=1)):
            raise ValueError("generators must be nonzero")
        object.__setattr__(self, "generators", g)
        if self.exact_coords is not None:
            ex = tuple(tuple(_as_quadratic(c) for c in row)
                       for row in self.exact_coords)
            if len(ex) != g.shape[0] or any(len(r) != g.shape[1] for r in ex):
                raise ValueError("exact coordinates must match the generators")
            for frow, erow in zip(g, ex):
                if max(abs(f - float(e)) for f, e in zip(frow, erow)) > 1e-12:
                    raise ValueError("exact coordinates disagree with floats")
            object.__setattr__(self, "exact_coords", ex)

    @property
    def count(self) -> int:
        return self.generators.shape[0]

    def real_rank(self) -> int:
        return int(np.linalg.matrix_rank(self.generators, tol=RANK_TOL))

    def basis_matrix(self) -> np.ndarray:
        """Generators as columns (d, m)."""
        return self.generators.T


def is_discrete(L: Lattice) -> Optional[bool]:
    """True/False when decidable; None for R-dependent float generators.

    The generated subgroup is discrete iff the Q-rank of the generators
    equals their R-rank.
    """
    if L.exact_coords is not None:
        # R-rank: exact elimination over Q(sqrt 2).
        rrank = _rank_exact([list(row) for row in L.exact_coords])
        # Q-rank: split a + b*sqrt2 into the rational pair (a, b).
        qrows = [[e.a for e in row] + [e.b for e in row]
                 for row in L.exact_coords]
        qrank = _rank_exact(qrows)
        return qrank == rrank
    if L.real_rank() == L.count:
        return True  # R-independent implies Q-independent implies discrete
    return None


def lattice_coordinates(L: Lattice, x) -> np.ndarray:
    """Least-squares coordinates of x in the generator basis, with snapping."""
    x = np.asarray(x, dtype=float)
    c, *_ = np.linalg.lstsq(L.basis_matrix(), x, rcond=None)
    r = np.round(c)
    return np.where(np.abs(c - r) <= SNAP_TOL, r, c)


def _require_discrete_basis(L: Lattice) -> None:
    if is_discrete(L) is not True:
        raise ValueError("operation requires a discrete lattice")
    if L.real_rank() != L.count:
        raise ValueError("operation requires independent generators")


def reduce(L: Lattice, x) -> np.ndarray:
    """Coset representative with lattice coordinates in [0, 1).

    The component of x outside the lattice span is left untouched.
    """
    _require_discrete_basis(L)
    x = np.asarray(x, dtype=float)
    c = lattice_coordinates(L, x)
    return x - L.basis_matrix() @ np.floor(c)


def coset_equal(L: Lattice, x, y) -> bool:
    """Decide x - y in L.

    Discrete lattices take float vectors; dense lattices require both the
    lattice and the points to carry exact Q(sqrt 2) coordinates.
    """
    if is_discrete(L) is True and not (
            isinstance(x, (list, tuple))
            and any(isinstance(c, QuadraticRational) for c in x)):
        diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
        c = lattice_coordinates(L, diff)
        if np.max(np.abs(L.basis_matrix() @ c - diff), initial=0.0) > SNAP_TOL:
            return False
        return bool(np.all(c == np.round(c)))
    if L.exact_coords is None:
        raise ValueError(
            "membership in a dense subgroup needs exact coordinates")
    xe = [_as_quadratic(c) for c in x]
    ye = [_as_quadratic(c) for c in y]
    diff = [a - b for a, b in zip(xe, ye)]
    # Solve sum_i n_i g_i = diff over Q by splitting off the sqrt2 part.
    mat = ([[g[j].a for g in L.exact_coords] for j in range(L.ambient_dim)]
           + [[g[j].b for g in L.exact_coords] for j in range(L.ambient_dim)])
    rhs = [d.a for d in diff] + [d.b for d in diff]
    sol = _solve_exact(mat, rhs)
    if sol is None:
        return False
    return all(n.denominator == 1 for n in sol)


def reduce_scalars(L: Lattice, values):
    """Ring-generic reduction: subtract the integer lattice part of the base.

    Near any point the reduction is a constant translation, so jets pass
    through unchanged except for their base coefficients.
    """
    base = np.array([v.base if isinstance(v, JetScalar) else float(v)
                     for v in values])
    shift = np.asarray(reduce(L, base), dtype=float) - base
    return [v + float(s) for v, s in zip(values, shift)]


def reduced_cocycle(f, L: Lattice):
    """Cocycle with values reduced modulo the period lattice.

    The reduction is ring-generic (see reduce_scalars), so the reduced
    cocycle still differentiates: near the identity the values stay inside
    one fundamental domain and the reduction is the identity there.
    """
    from .cocycle import GroupCocycle
    from .program import CallableProgram

    if L.ambient_dim != f.target_dim:
        raise ValueError("lattice must live in the cocycle's target space")

    def fn(xs):
        return reduce_scalars(L, f.program.eval(xs))

    return GroupCocycle(
        CallableProgram(fn, f.program.arity, f.target_dim, name="reduced"),
        f.group_dim, f.target_dim, f.radius,
        name=f"{f.name or 'f'} mod {L.name or 'L'}")


def get_lattice(name: str) -> Lattice:
    """Resolve 'Z1', 'Z2', 'Z+aZ' (alpha = sqrt 2, exact coordinates)."""
    one = QuadraticRational(Fraction(1))
    alpha = QuadraticRational(Fraction(0), Fraction(1))
    if name == "Z1":
        return Lattice(1, [[1.0]], ((one,),), name="Z1")
    if name == "Z2":
        return Lattice(2, [[1.0, 0.0], [0.0, 1.0]],
                       ((one, QuadraticRational(0)),
                        (QuadraticRational(0), one)), name="Z2")
    if name == "Z+aZ":
        return Lattice(1, [[1.0], [ALPHA]], ((one,), (alpha,)), name="Z+aZ")
    raise ValueError(f"unknown lattice {name!r}")


LATTICE_NAMES = ("Z1", "Z2", "Z+aZ")


def shift_invariance_check(G: ChartedGroup, shifts,
                           tol: float = 1e-8) -> float:
    """Max change of the structure constants under base-point shifts.

    For lattice-periodic chart data the constants must not move when the
    conjugation Hessian is evaluated at shifted representatives: the
    quotient has the same Lie algebra.
    """
    base = structure_constants(G, strict=False).structure
    worst = 0.0
    for shift in shifts:
        shift = np.asarray(shift, dtype=float)
        shifted = structure_constants(G, base_g=shift, base_h=shift,
                                      strict=False).structure
        worst = max(worst, float(np.max(np.abs(shifted - base))))
    if worst > tol:
        raise ValueError(
            f"structure constants moved by {worst:.3e} under lattice shifts")
    return worst
