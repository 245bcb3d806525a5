"""Martingale-representation constructions for skew tensor fields.

Two exact decompositions are built from named primitives only, so each
pipeline can be audited step by step:

* ``represent_co1``: u = d(t_map(u)) + t_pipeline(d u).  The second term
  integrates, above the largest param time, the conditioned first-slot
  density of d u against dB.
* ``represent_co2``: u = d*(s_map(u)) + correction, where the correction
  conditions the gradient of d* u at the largest param time.

Both residuals must canonicalise to zero for every skew input; the
remainder of the first lies in the kernel of the adapted projection, the
remainder of the second is adapted.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels as kn
from .chaos import (
    HTensorField,
    _field_raw,
    add as fadd,
    constant,
    expectation,
    is_adapted,
    scale as fscale,
    sub as fsub,
)
from .corruption import is_active
from .errors import NotClosedError, NotCoclosedError, ShapeMismatchError
from .forms import codifferential, exterior_derivative, _require_skew
from .malliavin import (
    condition_on_axis,
    gradient,
    ito_integral,
    project_adapted,
    project_adapted_j,
    skorohod,
)


def _tail_ito_first_axis(w: HTensorField) -> HTensorField:
    """Condition on the first param time, keep it above all other param
    times, and Ito-integrate it out.  Used by both t_map and the first
    representation's remainder."""
    out = condition_on_axis(w, 0)
    if not is_active("tmap-drop-restrict"):
        levels = {}
        for p, k in out.levels:
            for i in range(1, w.q):
                k = kn.order_restrict(k, i, 0)
            levels[p] = k
        out = _field_raw(w.grid, w.m, w.q, levels, skew=False)
    return ito_integral(out)


def t_map(u: HTensorField) -> HTensorField:
    """Order q -> q - 1: Ito-integrate the conditioned first-slot density
    over the region where the first time dominates the remaining ones
    (for q = 1 that is all of [0, T])."""
    if u.q < 1:
        raise ShapeMismatchError("t_map needs order >= 1")
    _require_skew(u, "t_map")
    return _tail_ito_first_axis(u)


def s_map(u: HTensorField) -> HTensorField:
    """Order q -> q + 1: the two indicator groups built from gradient(u).

    Group one conditions the new slot where its time dominates; group two
    swaps the new slot into position j and conditions where slot j
    dominates.  The sum equals (q+1) x the alternation of group one, which
    is enforced as a consistency check.
    """
    if u.q < 1:
        raise ShapeMismatchError("s_map needs order >= 1")
    _require_skew(u, "s_map")
    g = gradient(u)

    def _dominant(w: HTensorField, j: int) -> HTensorField:
        levels = {}
        for p, k in w.levels:
            for i in range(w.q):
                if i != j:
                    k = kn.order_restrict(k, i, j)
            levels[p] = k
        return condition_on_axis(_field_raw(w.grid, w.m, w.q, levels, skew=False), j)

    group_one = _dominant(g, 0)
    total = group_one
    for j in range(1, u.q + 1):
        swapped = _field_raw(
            g.grid, g.m, g.q, {p: kn.swap_axes(k, 0, j) for p, k in g.levels}, skew=False
        )
        total = fsub(total, _dominant(swapped, j))
    alt = _field_raw(
        g.grid,
        g.m,
        g.q,
        {p: kn.scale(kn.alternate(k, tuple(range(g.q))), g.q) for p, k in group_one.levels},
        skew=False,
    )
    if total != alt:
        raise AssertionError("s_map groups disagree with the alternation form")
    return _field_raw(g.grid, g.m, g.q, dict(total.levels), skew=True)


@dataclass(frozen=True)
class Decomposition:
    """u = exact_part + remainder, with the kernel-level residual kept."""

    kind: str
    exact_part: HTensorField
    remainder: HTensorField
    residual: HTensorField
    compact_ok: bool

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()


def represent_co1(u: HTensorField) -> Decomposition:
    """First representation: exact part d(t_map(u)), remainder from d u.

    At order 0 the exact part is the constant mean and the remainder is
    the classical conditioned-gradient Ito integral.
    """
    _require_skew(u, "represent_co1")
    if u.q == 0:
        exact = constant(u.grid, u.m, expectation(u))
        remainder = _tail_ito_first_axis(gradient(u))
        compact_rem = skorohod(project_adapted_j(gradient(u), 0))
    else:
        exact = exterior_derivative(t_map(u))
        remainder = _tail_ito_first_axis(exterior_derivative(u))
        compact_exact = exterior_derivative(skorohod(project_adapted_j(u, 0)))
        compact_rem = skorohod(project_adapted_j(exterior_derivative(u), 0))
    compact_ok = remainder == compact_rem and (u.q == 0 or exact == compact_exact)
    residual = fsub(u, fadd(exact, remainder))
    return Decomposition("CO-I", exact, remainder, residual, compact_ok)


def _co2_correction(u: HTensorField) -> HTensorField:
    """sum_j (-1)^{j-1} [conditioned gradient of d* u with its derivative
    slot moved to position j, restricted to slot j dominating]."""
    w = gradient(codifferential(u))
    total = None
    for j in range(u.q):
        moved = _field_raw(
            w.grid, w.m, w.q, {p: kn.move_axis(k, 0, j) for p, k in w.levels}, skew=False
        )
        levels = {}
        for p, k in moved.levels:
            for i in range(w.q):
                if i != j:
                    k = kn.order_restrict(k, i, j)
            levels[p] = k
        term = condition_on_axis(_field_raw(w.grid, w.m, w.q, levels, skew=False), j)
        term = fscale(term, (-1) ** j)
        total = term if total is None else fadd(total, term)
    return total


def represent_co2(u: HTensorField) -> Decomposition:
    """Second representation: exact part d*(s_map(u)) plus an adapted
    correction built from gradient(codifferential(u))."""
    if u.q < 1:
        raise ShapeMismatchError("represent_co2 needs order >= 1")
    _require_skew(u, "represent_co2")
    exact = codifferential(s_map(u))
    remainder = _co2_correction(u)
    # compact form: the same two terms written through the adapted
    # projection, with the insertion-alternation weights (q+1) and q
    g = gradient(u)
    alt1 = _field_raw(
        g.grid,
        g.m,
        g.q,
        {
            p: kn.scale(kn.alternate(k, tuple(range(g.q))), g.q)
            for p, k in project_adapted_j(g, 0).levels
        },
        skew=True,
    )
    compact_exact = codifferential(alt1)
    w = gradient(codifferential(u))
    if u.q == 1:
        compact_rem = condition_on_axis(w, 0)
    else:
        compact_rem = _field_raw(
            w.grid,
            w.m,
            w.q,
            {
                p: kn.scale(kn.alternate(k, tuple(range(w.q))), w.q)
                for p, k in project_adapted_j(w, 0).levels
            },
            skew=False,
        )
    compact_ok = exact == compact_exact and remainder == compact_rem
    residual = fsub(u, fadd(exact, remainder))
    return Decomposition("CO-II", exact, remainder, residual, compact_ok)


def reconstruct_closed(u: HTensorField) -> HTensorField:
    """For u with d u = 0 (checked): the reconstruction d(t_map(u))."""
    if u.q < 1:
        raise ShapeMismatchError("reconstruct_closed needs order >= 1")
    _require_skew(u, "reconstruct_closed")
    if not exterior_derivative(u).is_zero():
        raise NotClosedError("input has a nonzero exterior derivative")
    return exterior_derivative(t_map(u))


def reconstruct_coclosed(u: HTensorField) -> HTensorField:
    """For u with d* u = 0 (checked): the reconstruction d*(s_map(u))."""
    if u.q < 1:
        raise ShapeMismatchError("reconstruct_coclosed needs order >= 1")
    _require_skew(u, "reconstruct_coclosed")
    if not codifferential(u).is_zero():
        raise NotCoclosedError("input has a nonzero codifferential")
    return codifferential(s_map(u))


@dataclass(frozen=True)
class ClosednessWitness:
    witness: HTensorField
    closed: bool

    @property
    def agrees(self) -> bool:
        return self.witness.is_zero() == self.closed


def closedness_witness(u: HTensorField) -> ClosednessWitness:
    """The adapted first-slot projection of d u, plus the direct verdict.

    The witness vanishes exactly when d u does; both sides are computed
    independently so the equivalence itself is testable.
    """
    _require_skew(u, "closedness_witness")
    du = exterior_derivative(u)
    witness = project_adapted_j(du, 0)
    return ClosednessWitness(witness, du.is_zero())
