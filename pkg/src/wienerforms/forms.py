"""Exterior calculus on skew tensor fields.

The derivative is ``(q+1)`` times the alternation of the gradient; its
adjoint (with respect to the wedge-normalised pairing of ``l2_inner``) is
the divergence on the first slot.  The Hodge Laplacian is the usual
``d* d + d d*``.  Skewness is verified at operation boundaries rather
than trusted: sign conventions are the dominant bug source here.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels as kn
from .chaos import HTensorField, _field_raw, add as fadd, is_skew, scale as fscale, sub as fsub
from .errors import NotSkewError, ShapeMismatchError
from .malliavin import gradient, skorohod


def _require_skew(u: HTensorField, op: str) -> None:
    if not is_skew(u):
        raise NotSkewError(f"{op} requires a skew-symmetric field")


def exterior_derivative(u: HTensorField) -> HTensorField:
    """(q+1) x alternation of the gradient over all q+1 param axes."""
    _require_skew(u, "exterior_derivative")
    g = gradient(u)
    out = {
        p: kn.scale(kn.alternate(k, tuple(range(g.q))), g.q)
        for p, k in g.levels
    }
    return _field_raw(u.grid, u.m, g.q, out, skew=True)


def codifferential(u: HTensorField) -> HTensorField:
    """Divergence on the first slot of a skew field of order q + 1."""
    if u.q < 1:
        raise ShapeMismatchError("codifferential needs order >= 1")
    _require_skew(u, "codifferential")
    out = skorohod(u)
    if not is_skew(out):
        raise NotSkewError("codifferential output failed the skewness check")
    return _field_raw(u.grid, u.m, out.q, dict(out.levels), skew=True)


def laplacian(u: HTensorField) -> HTensorField:
    """Hodge Laplacian d*d + dd* (the second term is absent at order 0)."""
    _require_skew(u, "laplacian")
    total = codifferential(exterior_derivative(u))
    if u.q >= 1:
        total = fadd(total, exterior_derivative(codifferential(u)))
    return total


@dataclass(frozen=True)
class CommutationCheck:
    """Both sides of a derivative/divergence commutation identity."""

    lhs: HTensorField
    rhs: HTensorField
    residual: HTensorField

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()


def commutation_after_divergence(u: HTensorField) -> CommutationCheck:
    """gradient(skorohod(u)) vs u + skorohod(swap first two slots of gradient(u)).

    Valid for any tensor field with at least one param axis (skewness not
    required); this is the Heisenberg-type commutator of the two operators.
    """
    if u.q < 1:
        raise ShapeMismatchError("commutation check needs order >= 1")
    lhs = gradient(skorohod(u))
    g = gradient(u)
    twisted = _field_raw(
        u.grid, u.m, g.q, {p: kn.swap_axes(k, 0, 1) for p, k in g.levels}, skew=False
    )
    rhs = fadd(u, skorohod(twisted))
    return CommutationCheck(lhs, rhs, fsub(lhs, rhs))


def commutation_check_codifferential(u: HTensorField) -> CommutationCheck:
    """For skew u: gradient(codifferential(u)) = u + skorohod(tau_12 gradient(u))."""
    _require_skew(u, "commutation check")
    return commutation_after_divergence(u)


def commutation_check_derivative(u: HTensorField) -> CommutationCheck:
    """For skew u of order q: d(delta u) = q u + sum_j skorohod(tau_{1,j+1} grad u)."""
    if u.q < 1:
        raise ShapeMismatchError("commutation check needs order >= 1")
    _require_skew(u, "commutation check")
    lhs = exterior_derivative(codifferential(u))
    g = gradient(u)
    rhs = fscale(u, u.q)
    for j in range(1, u.q + 1):
        twisted = _field_raw(
            u.grid, u.m, g.q, {p: kn.swap_axes(k, 0, j) for p, k in g.levels}, skew=False
        )
        rhs = fadd(rhs, skorohod(twisted))
    return CommutationCheck(lhs, rhs, fsub(lhs, rhs))
