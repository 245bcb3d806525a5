"""Cell-ordered deterministic kernels and their exact linear algebra.

A kernel is a function ``[0,T]^A -> (R^m)^{tensor A}`` written as a finite
sum of *atoms*.  An atom assigns each of its ``A`` time axes to a grid
cell, imposes a strict total order on the axes sharing a cell, and carries
a sparse map from component multi-indices (one component in ``0..m-1``
per axis) to rational coefficients:

    atom(u_1..u_A) = sum_c coeff[c] e_{c_1} x ... x e_{c_A}
                     * prod_a 1[u_a in cell(a)]
                     * prod_{shared cells} 1[axes occur in the stated order]

Two distinct canonical atoms have a.e.-disjoint supports, which makes
equality, inner products and restrictions exact and purely combinatorial.
Unordered multi-axis input is expanded into all strict orders at build
time (the two representations agree almost everywhere).

All axis, cell and component indices here are 0-based.  Values are
immutable and every operation is a pure function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Sequence

from .errors import AxisError, CapExceededError, ShapeMismatchError
from .grid import TimeGrid

Components = tuple[int, ...]


@dataclass(frozen=True)
class Caps:
    """Blow-up guards; exceeding either is a hard error, never truncation."""

    max_atoms: int = 500_000
    max_axes: int = 12


_caps = Caps()


def set_caps(max_atoms: int | None = None, max_axes: int | None = None) -> Caps:
    global _caps
    _caps = Caps(
        max_atoms=_caps.max_atoms if max_atoms is None else max_atoms,
        max_axes=_caps.max_axes if max_axes is None else max_axes,
    )
    return _caps


def get_caps() -> Caps:
    return _caps


@dataclass(frozen=True)
class KernelAtom:
    """One piecewise block: cell assignment, within-cell orders, coefficients.

    ``cells[a]`` is the grid cell of axis ``a``; ``chains`` holds, for every
    cell containing two or more axes, the tuple of those axes in increasing
    time order (chains are sorted by cell index); ``coeff`` maps component
    multi-indices to nonzero rationals and is stored sorted.
    """

    cells: tuple[int, ...]
    chains: tuple[tuple[int, ...], ...]
    coeff: tuple[tuple[Components, Fraction], ...]

    @property
    def axis_count(self) -> int:
        return len(self.cells)

    def coeff_dict(self) -> dict[Components, Fraction]:
        return dict(self.coeff)

    def chain_of_cell(self, cell: int) -> tuple[int, ...] | None:
        for ch in self.chains:
            if self.cells[ch[0]] == cell:
                return ch
        return None


def _sorted_coeff(d: Mapping[Components, Fraction]) -> tuple[tuple[Components, Fraction], ...]:
    return tuple(sorted((c, v) for c, v in d.items() if v != 0))


def _validate_atom(atom: KernelAtom, axes: int, n_cells: int, m: int) -> None:
    if len(atom.cells) != axes:
        raise ShapeMismatchError(f"atom has {len(atom.cells)} axes, kernel expects {axes}")
    if any(not (0 <= c < n_cells) for c in atom.cells):
        raise ShapeMismatchError(f"atom cell out of range for grid with {n_cells} cells")
    seen: dict[int, list[int]] = {}
    for a, c in enumerate(atom.cells):
        seen.setdefault(c, []).append(a)
    chain_cells = []
    for ch in atom.chains:
        if len(ch) < 2:
            raise ShapeMismatchError("chains only cover cells with two or more axes")
        cell = atom.cells[ch[0]]
        chain_cells.append(cell)
        if sorted(ch) != sorted(seen.get(cell, [])):
            raise ShapeMismatchError("chain does not cover exactly the axes of its cell")
    if len(set(chain_cells)) != len(chain_cells):
        raise ShapeMismatchError("two chains for the same cell")
    need = {c for c, axs in seen.items() if len(axs) >= 2}
    if need != set(chain_cells):
        raise ShapeMismatchError("every multi-axis cell needs exactly one chain")
    for comps, val in atom.coeff:
        if len(comps) != axes:
            raise ShapeMismatchError("component multi-index length differs from axis count")
        if any(not (0 <= i < m) for i in comps):
            raise ShapeMismatchError(f"component index out of range for m={m}")
        if val == 0:
            raise ShapeMismatchError("stored zero coefficient")


def make_atoms(
    cells: Sequence[int],
    coeff: Mapping[Components, Fraction] | Fraction | int,
    orders: Mapping[int, Sequence[int]] | None = None,
) -> tuple[KernelAtom, ...]:
    """Build atoms, expanding cells without a stated order into all orders.

    ``orders`` maps a cell index to the axis sequence (increasing time) for
    that cell; any multi-axis cell not listed is unconstrained and expands
    into one atom per strict order.  A scalar ``coeff`` is shorthand for a
    single all-zero component multi-index (the m = 1 case).
    """
    cells = tuple(int(c) for c in cells)
    a_count = len(cells)
    if not isinstance(coeff, Mapping):
        coeff = {tuple([0] * a_count): Fraction(coeff)}
    cmap = {tuple(k): Fraction(v) for k, v in coeff.items() if Fraction(v) != 0}
    if not cmap:
        return ()
    by_cell: dict[int, list[int]] = {}
    for a, c in enumerate(cells):
        by_cell.setdefault(c, []).append(a)
    fixed: list[tuple[int, ...]] = []
    free: list[list[int]] = []
    given = {int(c): tuple(int(a) for a in seq) for c, seq in (orders or {}).items()}
    for c, axs in sorted(by_cell.items()):
        if len(axs) < 2:
            if c in given and len(given[c]) > 1:
                raise AxisError("order given for a cell with fewer than two axes")
            continue
        if c in given:
            if sorted(given[c]) != sorted(axs):
                raise AxisError("stated order does not cover the axes of its cell")
            fixed.append(given[c])
        else:
            free.append(axs)
    coeff_t = _sorted_coeff(cmap)
    atoms = []
    for perms in itertools.product(*[itertools.permutations(axs) for axs in free]):
        chains = tuple(sorted(fixed + [tuple(p) for p in perms], key=lambda ch: cells[ch[0]]))
        atoms.append(KernelAtom(cells=cells, chains=chains, coeff=coeff_t))
    return tuple(atoms)


def _merge_atoms(atoms: Iterable[KernelAtom]) -> tuple[KernelAtom, ...]:
    merged: dict[tuple, dict[Components, Fraction]] = {}
    for atom in atoms:
        key = (atom.cells, atom.chains)
        bucket = merged.setdefault(key, {})
        for comps, val in atom.coeff:
            new = bucket.get(comps, Fraction(0)) + val
            if new == 0:
                bucket.pop(comps, None)
            else:
                bucket[comps] = new
    out = []
    for (cells, chains), bucket in merged.items():
        if bucket:
            out.append(KernelAtom(cells=cells, chains=chains, coeff=_sorted_coeff(bucket)))
    out.sort(key=lambda a: (a.cells, a.chains))
    return tuple(out)


@dataclass(frozen=True)
class CellOrderedKernel:
    """Canonical finite sum of atoms over a common grid.

    Construction canonicalises: atoms with equal (cells, chains) merge,
    zero coefficients and zero atoms are dropped, atoms are sorted.
    """

    grid: TimeGrid
    m: int
    axes: int
    atoms: tuple[KernelAtom, ...] = ()

    def __post_init__(self):
        if self.m < 1:
            raise ShapeMismatchError("space dimension m must be >= 1")
        if self.axes < 0:
            raise ShapeMismatchError("axis count must be >= 0")
        if self.axes > _caps.max_axes:
            raise CapExceededError(f"axis count {self.axes} exceeds cap {_caps.max_axes}")
        merged = _merge_atoms(self.atoms)
        if len(merged) > _caps.max_atoms:
            raise CapExceededError(f"atom count {len(merged)} exceeds cap {_caps.max_atoms}")
        for atom in merged:
            _validate_atom(atom, self.axes, self.grid.n_cells, self.m)
        object.__setattr__(self, "atoms", merged)

    def is_zero(self) -> bool:
        return not self.atoms

    def __bool__(self) -> bool:
        return bool(self.atoms)


def kernel(
    grid: TimeGrid,
    m: int,
    axes: int,
    specs: Iterable[tuple] = (),
) -> CellOrderedKernel:
    """Convenience builder from ``(cells, coeff[, orders])`` spec tuples."""
    atoms: list[KernelAtom] = []
    for spec in specs:
        cells, coeff, *rest = spec
        orders = rest[0] if rest else None
        atoms.extend(make_atoms(cells, coeff, orders))
    return CellOrderedKernel(grid, m, axes, tuple(atoms))


def zero_kernel(grid: TimeGrid, m: int, axes: int) -> CellOrderedKernel:
    return CellOrderedKernel(grid, m, axes, ())


def scalar_kernel(grid: TimeGrid, m: int, value) -> CellOrderedKernel:
    v = Fraction(value)
    if v == 0:
        return zero_kernel(grid, m, 0)
    atom = KernelAtom(cells=(), chains=(), coeff=(((), v),))
    return CellOrderedKernel(grid, m, 0, (atom,))


def canonicalize(k: CellOrderedKernel) -> CellOrderedKernel:
    """Return the canonical form (idempotent; construction already canonicalises)."""
    return CellOrderedKernel(k.grid, k.m, k.axes, k.atoms)


def _check_same_shape(k1: CellOrderedKernel, k2: CellOrderedKernel) -> None:
    if k1.grid != k2.grid or k1.m != k2.m or k1.axes != k2.axes:
        raise ShapeMismatchError("kernels differ in grid, space dimension or axis count")


def add(*ks: CellOrderedKernel) -> CellOrderedKernel:
    first = ks[0]
    for k in ks[1:]:
        _check_same_shape(first, k)
    atoms = tuple(itertools.chain.from_iterable(k.atoms for k in ks))
    return CellOrderedKernel(first.grid, first.m, first.axes, atoms)


def scale(k: CellOrderedKernel, factor) -> CellOrderedKernel:
    f = Fraction(factor)
    if f == 0:
        return zero_kernel(k.grid, k.m, k.axes)
    atoms = tuple(
        KernelAtom(a.cells, a.chains, tuple((c, v * f) for c, v in a.coeff)) for a in k.atoms
    )
    return CellOrderedKernel(k.grid, k.m, k.axes, atoms)


def sub(k1: CellOrderedKernel, k2: CellOrderedKernel) -> CellOrderedKernel:
    return add(k1, scale(k2, -1))


def _check_axes(k: CellOrderedKernel, axes: Sequence[int]) -> None:
    if len(set(axes)) != len(axes):
        raise AxisError("repeated axis")
    for a in axes:
        if not (0 <= a < k.axes):
            raise AxisError(f"axis {a} out of range for {k.axes} axes")


def _permute_atom(atom: KernelAtom, perm: Sequence[int], n_axes: int, weight: Fraction) -> KernelAtom:
    cells = [0] * n_axes
    for a, c in enumerate(atom.cells):
        cells[perm[a]] = c
    cells_t = tuple(cells)
    chains = tuple(
        sorted(
            (tuple(perm[a] for a in ch) for ch in atom.chains),
            key=lambda ch: cells_t[ch[0]],
        )
    )
    coeff = []
    for comps, val in atom.coeff:
        nc = [0] * n_axes
        for a, i in enumerate(comps):
            nc[perm[a]] = i
        coeff.append((tuple(nc), val * weight))
    return KernelAtom(cells_t, chains, tuple(sorted(coeff)))


def permute_axes(k: CellOrderedKernel, perm: Sequence[int]) -> CellOrderedKernel:
    """Relabel axes: the slot at old position ``a`` moves to ``perm[a]``."""
    if sorted(perm) != list(range(k.axes)):
        raise AxisError("perm must be a permutation of all axes")
    one = Fraction(1)
    atoms = tuple(_permute_atom(atom, perm, k.axes, one) for atom in k.atoms)
    return CellOrderedKernel(k.grid, k.m, k.axes, atoms)


def swap_axes(k: CellOrderedKernel, a: int, b: int) -> CellOrderedKernel:
    """Transpose two axes (time argument and component index together)."""
    _check_axes(k, (a, b)) if a != b else _check_axes(k, (a,))
    perm = list(range(k.axes))
    perm[a], perm[b] = perm[b], perm[a]
    return permute_axes(k, perm)


def move_axis(k: CellOrderedKernel, src: int, dst: int) -> CellOrderedKernel:
    """Move one axis to a new position, shifting the axes in between."""
    _check_axes(k, (src,))
    _check_axes(k, (dst,))
    order = list(range(k.axes))
    order.remove(src)
    order.insert(dst, src)
    perm = [0] * k.axes
    for new, old in enumerate(order):
        perm[old] = new
    return permute_axes(k, perm)


def _subset_average(k: CellOrderedKernel, axes: Sequence[int] | None, signed: bool) -> CellOrderedKernel:
    axes = tuple(range(k.axes)) if axes is None else tuple(axes)
    _check_axes(k, axes)
    if len(axes) <= 1:
        return canonicalize(k)
    atoms = []
    weight = Fraction(1, factorial(len(axes)))
    for sigma in itertools.permutations(range(len(axes))):
        perm = list(range(k.axes))
        for pos, a in enumerate(axes):
            perm[a] = axes[sigma[pos]]
        w = weight * _perm_sign(sigma) if signed else weight
        atoms.extend(_permute_atom(atom, perm, k.axes, w) for atom in k.atoms)
    return CellOrderedKernel(k.grid, k.m, k.axes, tuple(atoms))


def _perm_sign(sigma: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(sigma)
    for i in range(len(sigma)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = sigma[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def symmetrize(k: CellOrderedKernel, axes: Sequence[int] | None = None) -> CellOrderedKernel:
    """Average over all permutations of the listed axes (default: all)."""
    return _subset_average(k, axes, signed=False)


def alternate(k: CellOrderedKernel, axes: Sequence[int] | None = None) -> CellOrderedKernel:
    """Signed average over permutations of the listed axes (default: all).

    This is the projection onto skew tensors with 1/len(axes)! weight, so
    alternate(alternate(k)) == alternate(k).
    """
    from .corruption import is_active

    out = _subset_average(k, axes, signed=True)
    if is_active("alternate-sign-flip"):
        out = scale(out, -1)
    return out


def order_restrict(k: CellOrderedKernel, a: int, b: int) -> CellOrderedKernel:
    """Multiply by the indicator that the time at axis ``a`` precedes axis ``b``."""
    if a == b:
        raise AxisError("order_restrict needs two distinct axes")
    _check_axes(k, (a, b))
    kept = []
    for atom in k.atoms:
        ca, cb = atom.cells[a], atom.cells[b]
        if ca < cb:
            kept.append(atom)
        elif ca > cb:
            continue
        else:
            chain = atom.chain_of_cell(ca)
            if chain.index(a) < chain.index(b):
                kept.append(atom)
    return CellOrderedKernel(k.grid, k.m, k.axes, tuple(kept))


def atom_volume(grid: TimeGrid, atom: KernelAtom) -> Fraction:
    """L^1 mass of the atom's support region."""
    vol = Fraction(1)
    counts: dict[int, int] = {}
    for c in atom.cells:
        counts[c] = counts.get(c, 0) + 1
    for c, j in counts.items():
        vol *= grid.width(c) ** j / factorial(j)
    return vol


def inner_product(k1: CellOrderedKernel, k2: CellOrderedKernel) -> Fraction:
    """Exact L^2([0,T]^A; (R^m)^{tensor A}) inner product.

    Distinct canonical atoms have disjoint supports, so only atom pairs
    with equal (cells, chains) contribute; each shared cell holding j
    ordered axes contributes width^j / j!.
    """
    _check_same_shape(k1, k2)
    lookup = {(a.cells, a.chains): a.coeff_dict() for a in k2.atoms}
    total = Fraction(0)
    for atom in k1.atoms:
        other = lookup.get((atom.cells, atom.chains))
        if other is None:
            continue
        s = Fraction(0)
        for comps, val in atom.coeff:
            v2 = other.get(comps)
            if v2 is not None:
                s += val * v2
        if s:
            total += s * atom_volume(k1.grid, atom)
    return total


def kernel_norm_sq(k: CellOrderedKernel) -> Fraction:
    return inner_product(k, k)
