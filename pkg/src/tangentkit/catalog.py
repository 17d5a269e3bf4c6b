"""Name resolution for groups, forms, cocycles, and lattices.

Everything the CLI can address lives here, so that unknown names are
rejected before any computation starts.
"""

from __future__ import annotations

import numpy as np

from .cocycle import AlgebraCocycle, GroupCocycle, coboundary_of
from .groups import GROUP_NAMES, get_group
from .lattice import LATTICE_NAMES, get_lattice
from .liegroup import ChartedGroup, structure_constants
from .program import trace

OMEGA_NAMES = ("zero", "symplectic", "coboundary")
COCYCLE_NAMES = ("heis", "zero", "coboundary:linear", "coboundary:quadratic",
                 "vanest:zero", "vanest:symplectic", "vanest:coboundary")

# Fixed functional coefficients used by the 'coboundary' entries; chosen
# once so that named objects are the same in every run.
_B_COEFFS = (1.0, 0.5, -0.25, 0.125)


def get_omega(name: str, G: ChartedGroup) -> AlgebraCocycle:
    """Resolve an algebra 2-cocycle for the group's Lie algebra."""
    n = G.dim
    if name == "zero":
        return AlgebraCocycle(n, 1, np.zeros((1, n, n)))
    if name == "symplectic":
        if n != 2:
            raise ValueError("the symplectic form needs a 2-dimensional chart")
        return AlgebraCocycle(2, 1, np.array([[[0.0, 1.0], [-1.0, 0.0]]]))
    if name == "coboundary":
        # omega = b o [.,.] for the fixed functional b: always a cocycle.
        c = structure_constants(G).structure
        b = np.array(_B_COEFFS[:n])
        return AlgebraCocycle(n, 1, np.einsum("ijk,k->ij", c, b)[None, :, :])
    raise ValueError(f"unknown form {name!r}")


def _potential(name: str, n: int):
    """Scalar potentials h with h(0) = 0 for coboundary cocycles."""
    a = _B_COEFFS[:n]
    if name == "linear":
        return trace(lambda v: [sum(a[i] * v[i] for i in range(n))], n)
    if name == "quadratic":
        return trace(lambda v: [sum(a[i] * v[i] * v[(i + 1) % n]
                                    for i in range(n))], n)
    raise ValueError(f"unknown potential {name!r}")


def get_cocycle(name: str, G: ChartedGroup, degree: int = 7) -> GroupCocycle:
    """Resolve 'heis', 'zero', 'coboundary:<h>', 'vanest:<omega>'."""
    n = G.dim
    if name == "heis":
        if n != 2:
            raise ValueError("the Heisenberg cocycle needs a 2-dimensional chart")
        return GroupCocycle(trace(lambda v: [v[0] * v[3]], 4), 2, 1,
                            G.domain_radius, name="heis")
    if name == "zero":
        return GroupCocycle(trace(lambda v: [0.0 * v[0]], 2 * n), n, 1,
                            G.domain_radius, name="zero")
    if name.startswith("coboundary:"):
        h = _potential(name.split(":", 1)[1], n)
        return coboundary_of(G, h, name=name)
    if name.startswith("vanest:"):
        from .vanest import triangle_rule, vanest_cocycle
        omega = get_omega(name.split(":", 1)[1], G)
        return vanest_cocycle(G, omega, triangle_rule(degree))
    raise ValueError(f"unknown cocycle {name!r}")


def catalog_listing() -> dict:
    return {
        "groups": list(GROUP_NAMES),
        "omegas": list(OMEGA_NAMES),
        "cocycles": list(COCYCLE_NAMES),
        "lattices": list(LATTICE_NAMES),
    }


__all__ = ["get_group", "get_omega", "get_cocycle", "get_lattice",
           "catalog_listing", "GROUP_NAMES", "OMEGA_NAMES",
           "COCYCLE_NAMES", "LATTICE_NAMES"]
