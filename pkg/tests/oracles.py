"""Independent oracles for the exact engine.

The moment oracle represents random scalars as polynomials in the
per-cell Brownian increments (independent centered Gaussians with
variance = cell width) and computes expectations by Wick's rule
E[X^(2k)] = (2k-1)!! var^k, all in exact rational arithmetic.  It shares
no code with the kernel engine: products are polynomial products and
conditioning integrates out the increments beyond the checkpoint.

Conversion of a chaos expansion into this basis uses the closed-form
simplex polynomials e_j(x, h) (e_0 = 1, e_1 = x, j e_j = x e_{j-1} -
h e_{j-2}), which exist only when each within-cell block carries a single
component; mixed-component blocks raise ``Unsupported``.
"""

from __future__ import annotations

from fractions import Fraction

from wienerforms.chaos import HTensorField
from wienerforms.grid import TimeGrid

Var = tuple[int, int]  # (cell, component)
Monomial = tuple[tuple[Var, int], ...]  # sorted ((var, power), ...)


class Unsupported(Exception):
    pass


class IncrementPoly:
    """Sparse polynomial over increment variables with Fraction coefficients."""

    def __init__(self, terms: dict[Monomial, Fraction] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c) -> "IncrementPoly":
        c = Fraction(c)
        return cls({(): c} if c else {})

    @classmethod
    def var(cls, cell: int, comp: int) -> "IncrementPoly":
        return cls({(((cell, comp), 1),): Fraction(1)})

    def __add__(self, other: "IncrementPoly") -> "IncrementPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return IncrementPoly(out)

    def __sub__(self, other: "IncrementPoly") -> "IncrementPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "IncrementPoly":
        c = Fraction(c)
        return IncrementPoly({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other: "IncrementPoly") -> "IncrementPoly":
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            d1 = dict(m1)
            for m2, c2 in other.terms.items():
                d = dict(d1)
                for v, p in m2:
                    d[v] = d.get(v, 0) + p
                key = tuple(sorted(d.items()))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return IncrementPoly(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, IncrementPoly) and self.terms == other.terms


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def wick_expectation(poly: IncrementPoly, grid: TimeGrid) -> Fraction:
    total = Fraction(0)
    for mono, coeff in poly.terms.items():
        term = coeff
        for (cell, _comp), power in mono:
            if power % 2 == 1:
                term = Fraction(0)
                break
            term *= _double_factorial(power - 1) * grid.width(cell) ** (power // 2)
        total += term
    return total


def wick_conditional(poly: IncrementPoly, grid: TimeGrid, checkpoint: int) -> IncrementPoly:
    """Integrate out every increment at or beyond the checkpoint cell."""
    out: dict[Monomial, Fraction] = {}
    for mono, coeff in poly.terms.items():
        kept = []
        factor = coeff
        for (cell, comp), power in mono:
            if cell < checkpoint:
                kept.append((((cell, comp)), power))
            else:
                if power % 2 == 1:
                    factor = Fraction(0)
                    break
                factor *= _double_factorial(power - 1) * grid.width(cell) ** (power // 2)
        if factor:
            key = tuple(sorted(kept))
            out[key] = out.get(key, Fraction(0)) + factor
    return IncrementPoly(out)


def _simplex_poly(cell: int, comp: int, h: Fraction, j: int) -> IncrementPoly:
    """Iterated-integral block of degree j in one component over one cell."""
    if j == 0:
        return IncrementPoly.const(1)
    x = IncrementPoly.var(cell, comp)
    prev, cur = IncrementPoly.const(1), x
    for k in range(2, j + 1):
        prev, cur = cur, (x * cur - prev.scale(h)).scale(Fraction(1, k))
    return cur


def scalar_to_poly(f: HTensorField) -> IncrementPoly:
    """Express a random scalar in the increment basis (single-component
    within-cell blocks only)."""
    if f.q != 0:
        raise Unsupported("only order-0 fields")
    total = IncrementPoly.const(0)
    for p, k in f.levels:
        for atom in k.atoms:
            by_cell: dict[int, list[int]] = {}
            for a in range(p):
                by_cell.setdefault(atom.cells[a], []).append(a)
            ordered = {}
            for cell, axs in by_cell.items():
                chain = atom.chain_of_cell(cell)
                ordered[cell] = list(chain) if chain else axs
            for comps, val in atom.coeff:
                term = IncrementPoly.const(val)
                for cell, axs in ordered.items():
                    word = [comps[a] for a in axs]
                    if len(set(word)) > 1:
                        raise Unsupported("mixed components within a cell block")
                    term = term * _simplex_poly(
                        cell, word[0], f.grid.width(cell), len(word)
                    )
                total = total + term
    return total
