"""Catalog of charted groups at desk scale.

Every chart is centered at the identity (multiplication programs satisfy
m(x, 0) = m(0, x) = x) and normalized so the chart derivative at the
identity is the coordinate identity.  Where a matrix realization exists,
the oracle basis lists the matrices corresponding to the chart's
coordinate directions, so the jet brackets can be checked against plain
matrix commutators.
"""

from __future__ import annotations

import numpy as np

from .liegroup import ChartedGroup
from .program import sqrt, trace


def _cross(a, b):
    return [a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _rn(n: int) -> ChartedGroup:
    return ChartedGroup(
        name=f"rn:{n}",
        dim=n,
        mult=trace(lambda v: [v[i] + v[n + i] for i in range(n)], 2 * n),
        inv=trace(lambda v: [-v[i] for i in range(n)], n),
        domain_radius=100.0,
    )


def _torus2() -> ChartedGroup:
    n = 2
    g = _rn(n)
    return ChartedGroup(
        name="torus2",
        dim=n,
        mult=g.mult,
        inv=g.inv,
        domain_radius=100.0,
        periodic_lattice="Z2",
    )


def _heisenberg3() -> ChartedGroup:
    # (x, y, z) <-> upper unitriangular I + x E12 + y E23 + z E13
    def mult(v):
        x1, y1, z1, x2, y2, z2 = v
        return [x1 + x2, y1 + y2, z1 + z2 + x1 * y2]

    def inv(v):
        x, y, z = v
        return [-x, -y, -z + x * y]

    e12 = np.zeros((3, 3)); e12[0, 1] = 1.0
    e23 = np.zeros((3, 3)); e23[1, 2] = 1.0
    e13 = np.zeros((3, 3)); e13[0, 2] = 1.0
    return ChartedGroup(
        name="heisenberg3",
        dim=3,
        mult=trace(mult, 6),
        inv=trace(inv, 3),
        domain_radius=10.0,
        oracle=(e12, e23, e13),
    )


def _affine1() -> ChartedGroup:
    # (u, b) <-> [[1 + u, b], [0, 1]]; valid while 1 + u > 0
    def mult(v):
        u1, b1, u2, b2 = v
        return [u1 + u2 + u1 * u2, b1 + b2 + u1 * b2]

    def inv(v):
        u, b = v
        return [1.0 / (1.0 + u) - 1.0, -b / (1.0 + u)]

    return ChartedGroup(
        name="affine1",
        dim=2,
        mult=trace(mult, 4),
        inv=trace(inv, 2),
        domain_radius=0.9,
        oracle=(np.array([[1.0, 0.0], [0.0, 0.0]]),
                np.array([[0.0, 1.0], [0.0, 0.0]])),
    )


def _so3() -> ChartedGroup:
    # Scaled Gibbs vector v = 2 tan(theta/2) n: a rational chart on rotations,
    # valid while v1 . v2 < 4.
    def mult(v):
        v1, v2 = v[:3], v[3:]
        num = [a + b + 0.5 * c for a, b, c in zip(v1, v2, _cross(v1, v2))]
        den = 1.0 - 0.25 * _dot(v1, v2)
        return [x / den for x in num]

    ls = []
    for k in range(3):
        m = np.zeros((3, 3))
        i, j = (k + 1) % 3, (k + 2) % 3
        m[j, i] = 1.0
        m[i, j] = -1.0
        ls.append(m)
    return ChartedGroup(
        name="so3",
        dim=3,
        mult=trace(mult, 6),
        inv=trace(lambda v: [-x for x in v], 3),
        domain_radius=1.0,
        oracle=tuple(ls),
    )


def _su2() -> ChartedGroup:
    # Unit quaternion (w, v/2), w = sqrt(1 - |v|^2 / 4); chart on the upper
    # hemisphere w > 0, valid while |v| < 2.
    def mult(v):
        v1, v2 = v[:3], v[3:]
        w1 = sqrt(1.0 - 0.25 * _dot(v1, v1))
        w2 = sqrt(1.0 - 0.25 * _dot(v2, v2))
        return [w1 * b + w2 * a + 0.5 * c
                for a, b, c in zip(v1, v2, _cross(v1, v2))]

    sigma = (
        np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
        np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
        np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
    )
    bs = tuple(-0.5j * s for s in sigma)
    return ChartedGroup(
        name="su2",
        dim=3,
        mult=trace(mult, 6),
        inv=trace(lambda v: [-x for x in v], 3),
        domain_radius=1.0,
        oracle=bs,
    )


def group_catalog() -> dict:
    """Factories keyed by catalog name (the 'rn' entry takes a dimension)."""
    return {
        "rn": _rn,
        "torus2": _torus2,
        "heisenberg3": _heisenberg3,
        "affine1": _affine1,
        "so3": _so3,
        "su2": _su2,
    }


def get_group(name: str) -> ChartedGroup:
    """Resolve 'rn:<n>', 'torus2', 'heisenberg3', 'affine1', 'so3', 'su2'."""
    cat = group_catalog()
    if name.startswith("rn:"):
        n = int(name.split(":", 1)[1])
        if n < 1:
            raise ValueError("rn dimension must be positive")
        return cat["rn"](n)
    if name in cat and name != "rn":
        return cat[name]()
    raise ValueError(f"unknown group {name!r}")


GROUP_NAMES = ("rn:1", "rn:2", "rn:3", "torus2", "heisenberg3",
               "affine1", "so3", "su2")
