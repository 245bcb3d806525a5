"""Chaos-graded random variables and H-tensor fields.

An ``HTensorField`` of order ``q`` stores, per chaos degree ``p``, a
cell-ordered kernel with ``q + p`` axes laid out ``[param_1..param_q |
chaos_1..chaos_p]``.  The field it represents has density

    field(s_1..s_q) = sum_p I_p( level_p(s_1..s_q; .) ),

where ``I_p`` is the p-fold multiple Wiener integral and the chaos axes
are stored symmetrised.  Order 0 plays the role of a random scalar (a
``ChaosScalar``): its level-0 kernel is the mean.

Component convention: each chaos axis's component index is the Brownian
coordinate its ``dB`` contracts against; param-axis components index the
tensor slot of the field value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Mapping, Sequence

from . import kernels as kn
from .contraction import contract
from .errors import (
    AxisError,
    DegreeOverflowError,
    ShapeMismatchError,
)
from .grid import TimeGrid
from .kernels import CellOrderedKernel

DEFAULT_CHAOS_CAP = 4


@dataclass(frozen=True)
class HTensorField:
    """Finite chaos expansion of an order-q tensor field (q = 0: scalar)."""

    grid: TimeGrid
    m: int
    q: int
    levels: tuple[tuple[int, CellOrderedKernel], ...]
    skew: bool = False

    def __post_init__(self):
        if self.q < 0:
            raise ShapeMismatchError("order q must be >= 0")
        lv = []
        for p, k in sorted(self.levels):
            if p < 0:
                raise ShapeMismatchError("chaos degree must be >= 0")
            if k.grid != self.grid or k.m != self.m:
                raise ShapeMismatchError("level kernel disagrees with field grid/m")
            if k.axes != self.q + p:
                raise ShapeMismatchError(
                    f"level {p} kernel has {k.axes} axes, expected {self.q + p}"
                )
            if not k.is_zero():
                lv.append((p, k))
        object.__setattr__(self, "levels", tuple(lv))

    def level(self, p: int) -> CellOrderedKernel:
        for pp, k in self.levels:
            if pp == p:
                return k
        return kn.zero_kernel(self.grid, self.m, self.q + p)

    def degrees(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.levels)

    def max_degree(self) -> int:
        return max((p for p, _ in self.levels), default=0)

    def is_zero(self) -> bool:
        return not self.levels

    def param_axes(self) -> tuple[int, ...]:
        return tuple(range(self.q))

    def chaos_axes(self, p: int) -> tuple[int, ...]:
        return tuple(range(self.q, self.q + p))

    # levels define equality; the skew flag is derived data
    def __eq__(self, other):
        if not isinstance(other, HTensorField):
            return NotImplemented
        return (
            self.grid == other.grid
            and self.m == other.m
            and self.q == other.q
            and self.levels == other.levels
        )

    def __hash__(self):
        return hash((self.grid, self.m, self.q, self.levels))


def field(
    grid: TimeGrid,
    m: int,
    q: int,
    levels: Mapping[int, CellOrderedKernel],
    skew: bool | None = None,
    symmetrize_chaos: bool = True,
) -> HTensorField:
    """Build a field, symmetrising chaos axes and deriving the skew flag.

    ``skew=None`` computes the flag; ``skew=True`` additionally verifies it.
    """
    fixed = {}
    for p, k in levels.items():
        if symmetrize_chaos and p >= 2:
            k = kn.symmetrize(k, tuple(range(q, q + p)))
        fixed[p] = k
    f = HTensorField(grid, m, q, tuple(fixed.items()), skew=False)
    actual = is_skew(f)
    if skew is True and not actual:
        from .errors import NotSkewError

        raise NotSkewError("field is not skew-symmetric across its param axes")
    return HTensorField(grid, m, q, f.levels, skew=actual if skew is None else skew and actual)


def _field_raw(
    grid: TimeGrid, m: int, q: int, levels: Mapping[int, CellOrderedKernel], skew: bool
) -> HTensorField:
    """Internal constructor for operator outputs with known-good invariants."""
    return HTensorField(grid, m, q, tuple(levels.items()), skew=skew)


def is_skew(u: HTensorField) -> bool:
    """True iff alternation over param axes fixes every level (q <= 1: always)."""
    if u.q <= 1:
        return True
    for p, k in u.levels:
        if kn.alternate(k, u.param_axes()) != k:
            return False
    return True


def alternate_params(u: HTensorField) -> HTensorField:
    """Project onto skew fields: alternate every level over the param axes."""
    out = {p: kn.alternate(k, u.param_axes()) for p, k in u.levels}
    return field(u.grid, u.m, u.q, out, symmetrize_chaos=False)


def constant(grid: TimeGrid, m: int, value) -> HTensorField:
    """The deterministic scalar ``value``."""
    return HTensorField(grid, m, 0, ((0, kn.scalar_kernel(grid, m, value)),))


def brownian(grid: TimeGrid, m: int = 1, checkpoint: int | None = None, component: int = 0) -> HTensorField:
    """B at a grid checkpoint (component-wise scalar), default the horizon."""
    k = grid.n_cells if checkpoint is None else checkpoint
    if not (0 <= k <= grid.n_cells):
        raise AxisError("checkpoint out of range")
    atoms = []
    for cell in range(k):
        comp = (component,)
        atoms.extend(kn.make_atoms((cell,), {comp: Fraction(1)}))
    lvl = CellOrderedKernel(grid, m, 1, tuple(atoms))
    return HTensorField(grid, m, 0, ((1, lvl),) if atoms else ())


def wiener_integral(grid: TimeGrid, m: int, slope_by_cell: Sequence[Sequence]) -> HTensorField:
    """I_1 of a piecewise-constant integrand (one m-vector slope per cell)."""
    atoms = []
    for cell, vec in enumerate(slope_by_cell):
        for comp, val in enumerate(vec):
            v = Fraction(val)
            if v:
                atoms.extend(kn.make_atoms((cell,), {(comp,): v}))
    return HTensorField(grid, m, 0, ((1, CellOrderedKernel(grid, m, 1, tuple(atoms))),))


def deterministic_field(grid: TimeGrid, m: int, q: int, k: CellOrderedKernel,
                        skew: bool | None = None) -> HTensorField:
    """Order-q field with no randomness: single level p = 0."""
    return field(grid, m, q, {0: k}, skew=skew, symmetrize_chaos=False)


def _check_same_space(u: HTensorField, v: HTensorField) -> None:
    if u.grid != v.grid or u.m != v.m or u.q != v.q:
        raise ShapeMismatchError("fields differ in grid, space dimension or order")


def add(u: HTensorField, v: HTensorField) -> HTensorField:
    _check_same_space(u, v)
    out = {}
    for p in sorted(set(u.degrees()) | set(v.degrees())):
        out[p] = kn.add(u.level(p), v.level(p))
    return _field_raw(u.grid, u.m, u.q, out, skew=u.skew and v.skew)


def sub(u: HTensorField, v: HTensorField) -> HTensorField:
    return add(u, scale(v, -1))


def scale(u: HTensorField, factor) -> HTensorField:
    out = {p: kn.scale(k, factor) for p, k in u.levels}
    return _field_raw(u.grid, u.m, u.q, out, skew=u.skew)


def expectation(f: HTensorField) -> Fraction:
    """Mean of a random scalar (order-0 field): its level-0 constant."""
    if f.q != 0:
        raise ShapeMismatchError("expectation is defined for order-0 fields")
    k = f.level(0)
    if k.is_zero():
        return Fraction(0)
    return k.atoms[0].coeff_dict()[()]


def expectation_field(u: HTensorField) -> HTensorField:
    """Pointwise mean: keep the deterministic level only."""
    out = {0: u.level(0)} if 0 in u.degrees() else {}
    return _field_raw(u.grid, u.m, u.q, out, skew=u.skew)


def conditional_expectation(f: HTensorField, checkpoint: int) -> HTensorField:
    """Project onto the sigma-algebra of the path up to grid checkpoint ``k``.

    Kernel-exact: per level, atoms with any chaos axis beyond cell ``k-1``
    are dropped (the chaos support is cut to [0, t_k]).
    """
    if not (0 <= checkpoint <= f.grid.n_cells):
        raise AxisError("conditioning time must be a grid checkpoint index")
    out = {}
    for p, k in f.levels:
        chaos = f.chaos_axes(p)
        kept = tuple(
            a for a in k.atoms if all(a.cells[c] < checkpoint for c in chaos)
        )
        out[p] = CellOrderedKernel(k.grid, k.m, k.axes, kept)
    return _field_raw(f.grid, f.m, f.q, out, skew=f.skew)


def l2_inner(u: HTensorField, v: HTensorField) -> Fraction:
    """E of the wedge-normalised pairing: (1/q!) sum_p p! <level_p, level_p>.

    The 1/q! factor matches the determinant inner product on q-fold wedges
    (so the exterior derivative and the first-slot divergence are exact
    adjoints); for order 0 it reduces to the plain chaos isometry.
    """
    _check_same_space(u, v)
    total = Fraction(0)
    for p in set(u.degrees()) & set(v.degrees()):
        total += factorial(p) * kn.inner_product(u.level(p), v.level(p))
    return total / factorial(u.q)


def l2_norm_sq(u: HTensorField) -> Fraction:
    return l2_inner(u, u)


def ito_product(u: HTensorField, v: HTensorField, p_max: int = DEFAULT_CHAOS_CAP) -> HTensorField:
    """Pointwise product of two random scalars via the chaos product rule.

    I_p(f) I_r(g) expands into contractions: the j-times-contracted term
    lands in chaos degree p + r - 2j with weight j! C(p,j) C(r,j).  Raises
    if a nonzero term would exceed ``p_max``, or if a contraction leaves
    the kernel class (possible for mixed-component within-cell orders).
    """
    _check_same_space(u, v)
    if u.q != 0:
        raise ShapeMismatchError("ito_product is defined for order-0 fields")
    out: dict[int, list[CellOrderedKernel]] = {}
    for p, f in u.levels:
        for r, g in v.levels:
            for j in range(min(p, r) + 1):
                target = p + r - 2 * j
                pairs = tuple((p - j + i, r - j + i) for i in range(j))
                raw = contract(f, g, pairs)
                if raw.is_zero():
                    continue
                w = factorial(j) * comb(p, j) * comb(r, j)
                term = kn.scale(kn.symmetrize(raw), w)
                if term.is_zero():
                    continue
                if target > p_max:
                    raise DegreeOverflowError(
                        f"product term of chaos degree {target} exceeds cap {p_max}"
                    )
                out.setdefault(target, []).append(term)
    levels = {t: kn.add(*ks) for t, ks in out.items()}
    return _field_raw(u.grid, u.m, 0, levels, skew=True)


def _max_param_axis(atom: kn.KernelAtom, q: int) -> int:
    """The param axis with the largest time on the atom's support."""
    best = None
    best_key = None
    for a in range(q):
        cell = atom.cells[a]
        chain = atom.chain_of_cell(cell)
        pos = chain.index(a) if chain else 0
        key = (cell, pos)
        if best_key is None or key > best_key:
            best, best_key = a, key
    return best


def _strictly_before(atom: kn.KernelAtom, a: int, b: int) -> bool:
    """True iff axis ``a`` is strictly earlier than axis ``b`` on the support."""
    if atom.cells[a] != atom.cells[b]:
        return atom.cells[a] < atom.cells[b]
    chain = atom.chain_of_cell(atom.cells[a])
    return chain.index(a) < chain.index(b)


def is_adapted(u: HTensorField) -> bool:
    """True iff every atom's chaos axes sit strictly below its top param time.

    For order 0 this degenerates to "deterministic" (no chaos axes at all).
    """
    if u.q == 0:
        return all(p == 0 for p, _ in u.levels)
    for p, k in u.levels:
        if p == 0:
            continue
        for atom in k.atoms:
            top = _max_param_axis(atom, u.q)
            for c in u.chaos_axes(p):
                if not _strictly_before(atom, c, top):
                    return False
    return True
