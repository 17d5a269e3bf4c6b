"""Truncated multi-dual (jet) scalars and the natural maps between orders.

A ``JetScalar`` of order k is an element of R[e1..ek]/(ei^2 = 0), stored as
2**k coefficients indexed by subsets of the slots {1..k} (slot i is bit
i-1 of the index).  A ``JetVector`` is a tuple of such scalars sharing one
order.  Order-k vectors are the coordinate form of k-fold iterated tangent
vectors over a Cartesian chart: slot 1 is the innermost tangent direction,
slot k the outermost.

The structural maps (footprint, zero section, fiberwise addition and
scaling, the canonical flip, the vertical lift, and the second-order
vertical map built from them) act purely on the coefficient tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import mul_coeffs
from .errors import DomainError, FiberMismatchError

K_MAX = 3
TAU_EQ = 1e-9


def _check_order(order: int) -> None:
    if not 0 <= order <= K_MAX:
        raise ValueError(f"jet order must be in [0, {K_MAX}], got {order}")


@dataclass(frozen=True)
class JetScalar:
    """One truncated multi-dual number. Immutable; arithmetic returns new values."""

    order: int
    coeffs: np.ndarray  # shape (2**order,), float64

    def __post_init__(self):
        _check_order(self.order)
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (1 << self.order,):
            raise ValueError("coefficient table has wrong length for order")
        object.__setattr__(self, "coeffs", c)

    @staticmethod
    def constant(value: float, order: int) -> "JetScalar":
        c = np.zeros(1 << order)
        c[0] = value
        return JetScalar(order, c)

    @staticmethod
    def variable(value: float, slot: int, order: int) -> "JetScalar":
        """value + e_slot, the seed of a single differentiation direction."""
        if not 1 <= slot <= order:
            raise ValueError(f"slot {slot} out of range for order {order}")
        c = np.zeros(1 << order)
        c[0] = value
        c[1 << (slot - 1)] = 1.0
        return JetScalar(order, c)

    @property
    def base(self) -> float:
        return float(self.coeffs[0])

    def coefficient(self, slots: tuple[int, ...]) -> float:
        idx = 0
        for s in slots:
            idx |= 1 << (s - 1)
        return float(self.coeffs[idx])

    def pad(self, order: int) -> "JetScalar":
        """Embed into a higher order; the new outer slots carry zeros."""
        if order == self.order:
            return self
        if order < self.order:
            raise ValueError("cannot pad to a lower order")
        _check_order(order)
        c = np.zeros(1 << order)
        c[: 1 << self.order] = self.coeffs
        return JetScalar(order, c)

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other) -> "JetScalar":
        if isinstance(other, JetScalar):
            if other.order != self.order:
                raise ValueError(
                    f"order mismatch: {self.order} vs {other.order}"
                )
            return other
        if isinstance(other, (int, float)):
            return JetScalar.constant(float(other), self.order)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, (int, float)):
            c = self.coeffs.copy()
            c[0] += other
            return JetScalar(self.order, c)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return JetScalar(self.order, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return JetScalar(self.order, -self.coeffs)

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            return self + (-other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return JetScalar(self.order, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return JetScalar(self.order, self.coeffs * float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return JetScalar(self.order, mul_coeffs(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def reciprocal(self) -> "JetScalar":
        b0 = self.base
        if b0 == 0.0:
            raise DomainError("division by a jet with zero base value")
        delta = self - b0
        inv = 1.0 / b0
        acc = JetScalar.constant(inv, self.order)
        power = JetScalar.constant(1.0, self.order)
        sign = 1.0
        for _ in range(self.order):
            power = power * delta
            sign = -sign
            inv = inv / b0
            acc = acc + power * (sign * inv)
        return acc

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            if other == 0:
                raise DomainError("division by zero")
            return self * (1.0 / other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("jet exponent must be an integer")
        if n < 0:
            return self.reciprocal() ** (-n)
        acc = JetScalar.constant(1.0, self.order)
        for _ in range(n):
            acc = acc * self
        return acc

    def __repr__(self):
        return f"JetScalar(order={self.order}, coeffs={self.coeffs.tolist()})"


def jet_mul(a: JetScalar, b: JetScalar) -> JetScalar:
    """Truncated product; raises on order mismatch."""
    if a.order != b.order:
        raise ValueError(f"order mismatch: {a.order} vs {b.order}")
    return a * b


# -- analytic primitives ----------------------------------------------------

def _table_exp(x, k):
    e = math.exp(x)
    return [e] * (k + 1)


def _table_log(x, k):
    if x <= 0.0:
        raise DomainError(f"log of nonpositive base {x}")
    out = [math.log(x)]
    if k >= 1:
        out.append(1.0 / x)
    if k >= 2:
        out.append(-1.0 / x**2)
    if k >= 3:
        out.append(2.0 / x**3)
    return out


def _table_sin(x, k):
    s, c = math.sin(x), math.cos(x)
    return [s, c, -s, -c][: k + 1]


def _table_cos(x, k):
    s, c = math.sin(x), math.cos(x)
    return [c, -s, -c, s][: k + 1]


def _table_sqrt(x, k):
    if x <= 0.0:
        raise DomainError(f"sqrt of nonpositive base {x}")
    s = math.sqrt(x)
    out = [s]
    if k >= 1:
        out.append(0.5 / s)
    if k >= 2:
        out.append(-0.25 / s**3)
    if k >= 3:
        out.append(0.375 / s**5)
    return out


def _table_atan(x, k):
    d = 1.0 / (1.0 + x * x)
    out = [math.atan(x)]
    if k >= 1:
        out.append(d)
    if k >= 2:
        out.append(-2.0 * x * d * d)
    if k >= 3:
        out.append((6.0 * x * x - 2.0) * d**3)
    return out


DERIVATIVE_TABLES = {
    "exp": _table_exp,
    "log": _table_log,
    "sin": _table_sin,
    "cos": _table_cos,
    "sqrt": _table_sqrt,
    "atan": _table_atan,
}

_FACTORIAL = [1.0, 1.0, 2.0, 6.0]


def compose_primitive(name: str, a: JetScalar, derivatives=None) -> JetScalar:
    """Taylor composition g(a) through the nilpotent part of a.

    Exact at order k because the nilpotent part has vanishing (k+1)-th
    power.  ``derivatives`` may supply the table g(x0)..g^(k)(x0) directly;
    otherwise it is looked up for the named primitive.
    """
    k = a.order
    if derivatives is None:
        derivatives = DERIVATIVE_TABLES[name](a.base, k)
    if len(derivatives) < k + 1:
        raise ValueError("derivative table too short for jet order")
    delta = a - a.base
    acc = JetScalar.constant(derivatives[0], k)
    power = JetScalar.constant(1.0, k)
    for m in range(1, k + 1):
        power = power * delta
        acc = acc + power * (derivatives[m] / _FACTORIAL[m])
    return acc


def jet_atan2(y: JetScalar, x: JetScalar) -> JetScalar:
    """atan2 on jets, by rotating the base point onto the positive axis."""
    if isinstance(x, (int, float)):
        x = JetScalar.constant(float(x), y.order)
    if isinstance(y, (int, float)):
        y = JetScalar.constant(float(y), x.order)
    if x.base == 0.0 and y.base == 0.0:
        raise DomainError("atan2 undefined at the origin")
    theta = math.atan2(y.base, x.base)
    c, s = math.cos(theta), math.sin(theta)
    xr = x * c + y * s   # base |(x0, y0)| > 0
    yr = y * c - x * s   # base 0
    return compose_primitive("atan", yr / xr) + theta


# -- jet vectors and the structural maps -------------------------------------

@dataclass(frozen=True)
class JetVector:
    """A tuple of JetScalars of one common order."""

    components: tuple[JetScalar, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("JetVector needs at least one component")
        order = comps[0].order
        if any(c.order != order for c in comps):
            raise ValueError("components must share one order")
        object.__setattr__(self, "components", comps)

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def order(self) -> int:
        return self.components[0].order

    @staticmethod
    def from_table(table: np.ndarray, order: int) -> "JetVector":
        """table has shape (dim, 2**order)."""
        return JetVector(tuple(JetScalar(order, row) for row in table))

    def table(self) -> np.ndarray:
        return np.stack([c.coeffs for c in self.components])

    def block(self, slots: tuple[int, ...]) -> np.ndarray:
        """The coefficient vector at one subset of slots."""
        return np.array([c.coefficient(slots) for c in self.components])

    def _map_indices(self, new_order: int, index_map) -> "JetVector":
        old = self.table()
        new = np.zeros((self.dim, 1 << new_order))
        for m in range(old.shape[1]):
            new[:, index_map(m)] = old[:, m]
        return JetVector.from_table(new, new_order)


def seed(base, direction, slot: int, order: int) -> JetVector:
    """The jet with base at the empty set and direction at {slot}."""
    base = np.asarray(base, dtype=float)
    direction = np.asarray(direction, dtype=float)
    if base.shape != direction.shape or base.ndim != 1:
        raise ValueError("base and direction must be vectors of equal dimension")
    if not 1 <= slot <= order:
        raise ValueError(f"slot {slot} out of range for order {order}")
    _check_order(order)
    table = np.zeros((base.shape[0], 1 << order))
    table[:, 0] = base
    table[:, 1 << (slot - 1)] = direction
    return JetVector.from_table(table, order)


def footprint(v: JetVector) -> JetVector:
    """Drop the outermost slot: the bundle projection of the top tangent."""
    if v.order == 0:
        raise ValueError("footprint of an order-0 jet is undefined")
    half = 1 << (v.order - 1)
    return JetVector.from_table(v.table()[:, :half], v.order - 1)


def zero_section(v: JetVector) -> JetVector:
    """Embed with zero coefficients in a new outermost slot."""
    _check_order(v.order + 1)
    table = np.zeros((v.dim, 1 << (v.order + 1)))
    table[:, : 1 << v.order] = v.table()
    return JetVector.from_table(table, v.order + 1)


def insert_zero_slot(v: JetVector, slot: int) -> JetVector:
    """Insert a fresh zero slot at the given position, shifting higher slots up.

    slot = order+1 is the zero section; slot = 1 is the tangent of the zero
    section (the functor applied to it).
    """
    k = v.order
    if not 1 <= slot <= k + 1:
        raise ValueError(f"slot {slot} out of range for order {k}")
    _check_order(k + 1)
    low_mask = (1 << (slot - 1)) - 1

    def index_map(m):
        return (m & low_mask) | ((m >> (slot - 1)) << slot)

    return v._map_indices(k + 1, index_map)


def scalar_mult(t: float, v: JetVector) -> JetVector:
    """Scale the outermost fiber, fixing the footprint."""
    if v.order == 0:
        raise ValueError("order-0 jets have no fiber to scale")
    table = v.table().copy()
    half = 1 << (v.order - 1)
    table[:, half:] *= t
    return JetVector.from_table(table, v.order)


def _check_same_fiber(v: JetVector, w: JetVector, tau: float) -> None:
    if v.order != w.order or v.dim != w.dim:
        raise ValueError("fiberwise operation needs equal orders and dimensions")
    if v.order == 0:
        raise ValueError("order-0 jets have no fiber")
    half = 1 << (v.order - 1)
    gap = np.max(np.abs(v.table()[:, :half] - w.table()[:, :half]))
    if gap > tau:
        raise FiberMismatchError(
            f"footprints differ by {gap:.3e} (> {tau:.1e})"
        )


def fiber_add(v: JetVector, w: JetVector, tau: float = TAU_EQ) -> JetVector:
    """Add the outermost fibers of two jets over one footprint."""
    _check_same_fiber(v, w, tau)
    half = 1 << (v.order - 1)
    table = v.table().copy()
    table[:, half:] += w.table()[:, half:]
    return JetVector.from_table(table, v.order)


def fiber_sub(v: JetVector, w: JetVector, tau: float = TAU_EQ) -> JetVector:
    """Subtract outermost fibers; the difference map used to read off brackets."""
    _check_same_fiber(v, w, tau)
    half = 1 << (v.order - 1)
    table = v.table().copy()
    table[:, half:] -= w.table()[:, half:]
    return JetVector.from_table(table, v.order)


def flip(v: JetVector, slot: int = 1) -> JetVector:
    """Swap slots (slot, slot+1) in every index set: the canonical flip."""
    k = v.order
    if not 1 <= slot <= k - 1:
        raise ValueError(f"flip needs order >= {slot + 1}, got {k}")
    b0, b1 = slot - 1, slot

    def index_map(m):
        x = (m >> b0) & 1
        y = (m >> b1) & 1
        m &= ~((1 << b0) | (1 << b1))
        return m | (y << b0) | (x << b1)

    return v._map_indices(k, index_map)


def lift_at(v: JetVector, slot: int) -> JetVector:
    """Move the content of one slot into the mixed slot of two fresh ones."""
    k = v.order
    if not 1 <= slot <= k:
        raise ValueError(f"slot {slot} out of range for order {k}")
    _check_order(k + 1)
    low_mask = (1 << (slot - 1)) - 1

    def index_map(m):
        low = m & low_mask
        bit = (m >> (slot - 1)) & 1
        high = (m >> slot) << (slot + 1)
        mid = ((1 << (slot - 1)) | (1 << slot)) if bit else 0
        return low | mid | high

    return v._map_indices(k + 1, index_map)


def vertical_lift(v: JetVector) -> JetVector:
    """(u, v) -> (u, 0, 0, v): embed the outermost fiber purely vertically."""
    if v.order == 0:
        raise ValueError("vertical lift needs order >= 1")
    return lift_at(v, v.order)


def lambda2(w: JetVector, b: JetVector, tau: float = TAU_EQ) -> JetVector:
    """The second-order vertical map (u, w), (u, b) -> (u, w, 0, b).

    Built as flip(T0(w) + lift(b)): the composition that characterizes the
    kernel of the projected tangent, through which brackets are read off.
    """
    if w.order != 1 or b.order != 1:
        raise ValueError("lambda2 expects order-1 jets")
    t0w = insert_zero_slot(w, 1)
    lb = vertical_lift(b)
    return flip(fiber_add(t0w, lb, tau), 1)
