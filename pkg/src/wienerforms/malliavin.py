"""Malliavin operators: gradient, divergence, free-time conditioning,
and the adapted projections.

Everything acts level-by-level on the chaos expansion and is exact:

* ``gradient`` sends chaos degree p to p - 1 and prepends a param axis
  (the derivative's time slot sits first).
* ``skorohod`` absorbs param axis 0 into the chaos group (degree p to
  p + 1) and re-symmetrises; restricted to adapted integrands it is the
  Ito integral.
* ``condition_on_axis`` restricts every chaos axis strictly below a free
  param time, which is conditioning on the path up to that running time.
* ``project_adapted_j`` keeps the region where param axis j carries the
  largest time and conditions there; the adapted projection is the sum
  over j (ties sit on null sets and are excluded by strict orders).
"""

from __future__ import annotations

from . import kernels as kn
from .chaos import HTensorField, _field_raw, expectation
from .errors import AxisError, NotAdaptedError, ShapeMismatchError
from .kernels import CellOrderedKernel


def gradient(u: HTensorField) -> HTensorField:
    """H-gradient: order q -> q + 1, new param axis first."""
    out: dict[int, CellOrderedKernel] = {}
    for p, k in u.levels:
        if p == 0:
            continue
        moved = kn.move_axis(k, u.q, 0)
        out[p - 1] = kn.scale(moved, p)
    return _field_raw(u.grid, u.m, u.q + 1, out, skew=u.q + 1 <= 1)


def skorohod(u: HTensorField) -> HTensorField:
    """Divergence on param axis 0: order q + 1 -> q, chaos degree p -> p + 1."""
    if u.q < 1:
        raise ShapeMismatchError("skorohod needs at least one param axis")
    q_out = u.q - 1
    out: dict[int, list[CellOrderedKernel]] = {}
    for p, k in u.levels:
        moved = kn.move_axis(k, 0, u.q + p - 1)
        sym = kn.symmetrize(moved, tuple(range(q_out, q_out + p + 1)))
        out.setdefault(p + 1, []).append(sym)
    levels = {p: kn.add(*ks) for p, ks in out.items()}
    return _field_raw(u.grid, u.m, q_out, levels, skew=q_out <= 1)


def condition_on_axis(u: HTensorField, j: int) -> HTensorField:
    """Condition on the path up to the (free) time of param axis ``j``."""
    if not (0 <= j < u.q):
        raise AxisError(f"param axis {j} out of range for order {u.q}")
    out = {}
    for p, k in u.levels:
        for c in u.chaos_axes(p):
            k = kn.order_restrict(k, c, j)
        out[p] = k
    return _field_raw(u.grid, u.m, u.q, out, skew=False)


def project_adapted_j(u: HTensorField, j: int) -> HTensorField:
    """The j-th adapted-projection summand: restrict axis j to carry the
    largest param time, then condition there."""
    if u.q < 1:
        raise ShapeMismatchError("adapted projection needs order >= 1")
    if not (0 <= j < u.q):
        raise AxisError(f"param axis {j} out of range for order {u.q}")
    out = {}
    for p, k in u.levels:
        for i in range(u.q):
            if i != j:
                k = kn.order_restrict(k, i, j)
        for c in range(u.q, u.q + p):
            k = kn.order_restrict(k, c, j)
        out[p] = k
    return _field_raw(u.grid, u.m, u.q, out, skew=False)


def project_adapted(u: HTensorField) -> HTensorField:
    """Projection onto fields measurable at their own largest param time."""
    if u.q < 1:
        raise ShapeMismatchError(
            "adapted projection needs order >= 1; for order 0 use expectation"
        )
    from .chaos import add as fadd

    total = project_adapted_j(u, 0)
    for j in range(1, u.q):
        total = fadd(total, project_adapted_j(u, j))
    return _field_raw(u.grid, u.m, u.q, dict(total.levels), skew=u.skew)


def _adapted_in_first_axis(u: HTensorField) -> bool:
    from .chaos import _strictly_before

    for p, k in u.levels:
        if p == 0:
            continue
        for atom in k.atoms:
            for c in u.chaos_axes(p):
                if not _strictly_before(atom, c, 0):
                    return False
    return True


def ito_integral(u: HTensorField) -> HTensorField:
    """Ito integral over param axis 0; requires adaptedness in that axis."""
    if u.q < 1:
        raise ShapeMismatchError("ito_integral needs at least one param axis")
    if not _adapted_in_first_axis(u):
        raise NotAdaptedError("integrand is not adapted in its first param axis")
    return skorohod(u)
