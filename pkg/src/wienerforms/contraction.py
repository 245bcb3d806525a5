"""Exact pairing of kernel axes: tensor products and contractions.

``contract(k1, k2, pairs)`` integrates each paired time variable over
[0, T] (with the paired component indices summed) and returns a kernel on
the remaining axes of ``k1`` followed by those of ``k2``.

Within a cell the integral of an order-indicator region over the paired
variables is, as a function of the positions of the remaining ("fixed")
variables in that cell, a polynomial in the gaps between consecutive
fixed positions: every admissible interleaving of ``e_i`` integrated
variables into gap ``i`` contributes ``prod_i g_i^{e_i} / e_i!``.  The
contraction lies in the kernel class exactly when, after summing over all
atom pairs, each such polynomial collapses to a multiple of
``prod_cells (g_0 + ... + g_k)^{d}`` — i.e. is constant on the cell.
Otherwise the result genuinely depends on where the fixed times sit
inside the cell and ``OutsideClassError`` is raised.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import Sequence

from .errors import AxisError, OutsideClassError, ShapeMismatchError
from .kernels import CellOrderedKernel, KernelAtom, _sorted_coeff

# A cell member is ("f", axis), ("g", axis) or ("u", pair_index).
_F, _G, _U = "f", "g", "u"


def _interleavings(members, constraints):
    """Yield all total orders of ``members`` consistent with ``constraints``.

    ``constraints`` is a set of (x, y) pairs meaning x strictly before y.
    Members lists are tiny (a handful of axes), so simple backtracking
    over topological orders is plenty.
    """
    after = {x: set() for x in members}
    indeg = {x: 0 for x in members}
    for x, y in constraints:
        if y not in after[x]:
            after[x].add(y)
            indeg[y] += 1

    order: list = []

    def rec():
        if len(order) == len(members):
            yield tuple(order)
            return
        for x in members:
            if indeg[x] == 0 and x not in used:
                used.add(x)
                order.append(x)
                for y in after[x]:
                    indeg[y] -= 1
                yield from rec()
                for y in after[x]:
                    indeg[y] += 1
                order.pop()
                used.discard(x)

    used: set = set()
    yield from rec()


def _cell_layouts(members, constraints):
    """Per fixed-axis chain, the gap polynomial of the integrated members.

    Returns ``{fixed_chain: {exponents: coefficient}}`` where
    ``fixed_chain`` is the induced order of the fixed members,
    ``exponents`` counts integrated members per gap (len = #fixed + 1) and
    the coefficient collects ``prod 1/e_i!`` over interleavings.
    """
    out: dict[tuple, dict[tuple[int, ...], Fraction]] = {}
    for order in _interleavings(members, constraints):
        fixed_chain = tuple(x for x in order if x[0] != _U)
        exps = [0] * (len(fixed_chain) + 1)
        gap = 0
        for x in order:
            if x[0] == _U:
                exps[gap] += 1
            else:
                gap += 1
        key = tuple(exps)
        coeff = Fraction(1)
        for e in exps:
            coeff /= factorial(e)
        bucket = out.setdefault(fixed_chain, {})
        bucket[key] = bucket.get(key, Fraction(0)) + coeff
    return out


def _chain_constraints(atom: KernelAtom, tag: str, paired: dict[int, int]):
    """Strict-order constraints of one atom, with axes renamed to members."""

    def name(axis: int):
        if axis in paired:
            return (_U, paired[axis])
        return (tag, axis)

    cons = []
    for ch in atom.chains:
        for x, y in zip(ch, ch[1:]):
            cons.append((name(x), name(y)))
    return cons


def _collapse_group(monomials, gap_counts, widths):
    """Check a multi-homogeneous polynomial is constant per cell; return it.

    ``monomials`` maps ``{cell: exponent-tuple}`` (as a sorted tuple of
    items) to coefficients.  Constancy on the product of cells means the
    polynomial equals ``lam * prod_c (sum of gaps)^{d_c}``; we derive
    ``lam`` from one monomial and demand the full multinomial expansion.
    """
    sample_key, sample_val = next(iter(monomials.items()))
    degrees = {cell: sum(exps) for cell, exps in sample_key}
    lam = sample_val
    for cell, exps in sample_key:
        mult = Fraction(factorial(degrees[cell]))
        for e in exps:
            mult /= factorial(e)
        lam /= mult
    expected = {}
    per_cell = []
    for cell, _ in sample_key:
        d = degrees[cell]
        k = gap_counts[cell]
        per_cell.append([(cell, comp) for comp in _compositions(d, k)])
    for combo in itertools.product(*per_cell):
        mult = Fraction(1)
        for cell, exps in combo:
            m = Fraction(factorial(degrees[cell]))
            for e in exps:
                m /= factorial(e)
            mult *= m
        expected[tuple(combo)] = lam * mult
    if expected != monomials:
        return None
    value = lam
    for cell, d in degrees.items():
        value *= widths[cell] ** d
    return value


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative ints summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def contract(
    k1: CellOrderedKernel,
    k2: CellOrderedKernel,
    pairs: Sequence[tuple[int, int]] = (),
) -> CellOrderedKernel:
    """Integrate paired axes against each other; remaining axes of k1 then k2."""
    if k1.grid != k2.grid or k1.m != k2.m:
        raise ShapeMismatchError("contract needs a common grid and space dimension")
    pairs = tuple((int(a), int(b)) for a, b in pairs)
    left = [a for a, _ in pairs]
    right = [b for _, b in pairs]
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        raise AxisError("an axis may be paired at most once")
    for a in left:
        if not (0 <= a < k1.axes):
            raise AxisError(f"paired axis {a} out of range for first kernel")
    for b in right:
        if not (0 <= b < k2.axes):
            raise AxisError(f"paired axis {b} out of range for second kernel")
    paired1 = {a: i for i, (a, _) in enumerate(pairs)}
    paired2 = {b: i for i, (_, b) in enumerate(pairs)}
    free1 = [a for a in range(k1.axes) if a not in paired1]
    free2 = [b for b in range(k2.axes) if b not in paired2]
    out_axes = len(free1) + len(free2)
    out_pos = {(_F, a): i for i, a in enumerate(free1)}
    out_pos.update({(_G, b): len(free1) + i for i, b in enumerate(free2)})
    widths = k1.grid.widths

    # skeleton -> component -> {monomial: coefficient};
    # monomial = sorted tuple of (cell, exponent-tuple) over cells with
    # integrated members.
    acc: dict[tuple, dict[tuple, dict[tuple, Fraction]]] = {}
    skel_gap_counts: dict[tuple, dict[int, int]] = {}

    for a1 in k1.atoms:
        for a2 in k2.atoms:
            if any(a1.cells[a] != a2.cells[b] for a, b in pairs):
                continue
            members_by_cell: dict[int, list] = {}
            for a in free1:
                members_by_cell.setdefault(a1.cells[a], []).append((_F, a))
            for b in free2:
                members_by_cell.setdefault(a2.cells[b], []).append((_G, b))
            for i, (a, _) in enumerate(pairs):
                members_by_cell.setdefault(a1.cells[a], []).append((_U, i))
            constraints = _chain_constraints(a1, _F, paired1) + _chain_constraints(
                a2, _G, paired2
            )
            cons_by_cell: dict[int, list] = {c: [] for c in members_by_cell}
            member_cell = {}
            for c, ms in members_by_cell.items():
                for x in ms:
                    member_cell[x] = c
            for x, y in constraints:
                cons_by_cell[member_cell[x]].append((x, y))

            layouts = {}
            feasible = True
            for c, ms in members_by_cell.items():
                lay = _cell_layouts(ms, cons_by_cell[c])
                if not lay:
                    feasible = False
                    break
                layouts[c] = lay
            if not feasible:
                continue

            comp_terms: dict[tuple, Fraction] = {}
            for comps1, v1 in a1.coeff:
                for comps2, v2 in a2.coeff:
                    if any(comps1[a] != comps2[b] for a, b in pairs):
                        continue
                    out_comp = tuple(
                        [comps1[a] for a in free1] + [comps2[b] for b in free2]
                    )
                    comp_terms[out_comp] = comp_terms.get(out_comp, Fraction(0)) + v1 * v2
            if not comp_terms:
                continue

            cells_sorted = sorted(members_by_cell)
            for choice in itertools.product(*[sorted(layouts[c]) for c in cells_sorted]):
                out_cells = [0] * out_axes
                for a in free1:
                    out_cells[out_pos[(_F, a)]] = a1.cells[a]
                for b in free2:
                    out_cells[out_pos[(_G, b)]] = a2.cells[b]
                chains = []
                gap_counts = {}
                monomial = []
                poly_coeff = Fraction(1)
                for c, fixed_chain in zip(cells_sorted, choice):
                    if len(fixed_chain) >= 2:
                        chains.append(tuple(out_pos[x] for x in fixed_chain))
                    gap_counts[c] = len(fixed_chain) + 1
                    exps_poly = layouts[c][fixed_chain]
                    monomial.append((c, exps_poly))
                # expand product over cells of per-cell polynomials
                cells_mon = [c for c, _ in monomial]
                per_cell_items = [sorted(p.items()) for _, p in monomial]
                out_cells_t = tuple(out_cells)
                chains_t = tuple(sorted(chains, key=lambda ch: out_cells_t[ch[0]]))
                skel = (out_cells_t, chains_t)
                dest = acc.setdefault(skel, {})
                skel_gap_counts.setdefault(skel, {}).update(gap_counts)
                for combo in itertools.product(*per_cell_items):
                    coeff = poly_coeff
                    mono_key = []
                    for c, (exps, w) in zip(cells_mon, combo):
                        coeff *= w
                        if sum(exps) > 0:
                            mono_key.append((c, exps))
                    mono_key = tuple(sorted(mono_key))
                    for out_comp, cval in comp_terms.items():
                        bucket = dest.setdefault(out_comp, {})
                        bucket[mono_key] = bucket.get(mono_key, Fraction(0)) + coeff * cval

    out_atoms = []
    for (cells, chains), by_comp in acc.items():
        coeff_map: dict[tuple, Fraction] = {}
        for comp, poly in by_comp.items():
            total = Fraction(0)
            groups: dict[tuple, dict] = {}
            for mono, val in poly.items():
                if val == 0:
                    continue
                profile = tuple((c, sum(exps)) for c, exps in mono)
                groups.setdefault(profile, {})[mono] = val
            for profile, monos in groups.items():
                if profile == ():
                    total += monos[()]
                    continue
                value = _collapse_group(monos, skel_gap_counts[(cells, chains)], widths)
                if value is None:
                    raise OutsideClassError(
                        "contraction result depends on the position of a free time "
                        f"inside cell(s) {[c for c, _ in profile]}; it is not "
                        "piecewise constant and cannot be represented exactly"
                    )
                total += value
            if total != 0:
                coeff_map[comp] = total
        if coeff_map:
            out_atoms.append(
                KernelAtom(cells=cells, chains=chains, coeff=_sorted_coeff(coeff_map))
            )
    return CellOrderedKernel(k1.grid, k1.m, out_axes, tuple(out_atoms))


def tensor_product(k1: CellOrderedKernel, k2: CellOrderedKernel) -> CellOrderedKernel:
    """Pointwise tensor product (contract with no pairs); interleavings expand."""
    return contract(k1, k2, ())
