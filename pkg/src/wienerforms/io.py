"""JSON serialisation for kernels and fields (bit-exact round trips).

On the wire, cells, axes and components are 1-based and every rational is
either an exact ``num``/``den`` integer pair (coefficients) or a "p/q"
string (grid times).  Canonical objects serialise deterministically, so
``loads(dumps(x)) == x`` and ``dumps(loads(s)) == s`` for canonical ``s``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .chaos import HTensorField, field
from .errors import ShapeMismatchError
from .grid import TimeGrid
from .kernels import CellOrderedKernel, KernelAtom, make_atoms

_JSON_KW = dict(sort_keys=True, separators=(",", ":"))


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def grid_to_dict(grid: TimeGrid) -> dict:
    return {
        "T": _frac_str(grid.horizon),
        "breakpoints": [_frac_str(b) for b in grid.breakpoints],
    }


def grid_from_dict(d: dict) -> TimeGrid:
    grid = TimeGrid.from_breakpoints([Fraction(b) for b in d["breakpoints"]])
    if Fraction(d["T"]) != grid.horizon:
        raise ShapeMismatchError("grid horizon disagrees with final breakpoint")
    return grid


def kernel_to_dict(k: CellOrderedKernel) -> dict:
    atoms = []
    for atom in k.atoms:
        orders = [
            {"cell": atom.cells[ch[0]] + 1, "axis_sequence": [a + 1 for a in ch]}
            for ch in atom.chains
        ]
        coeff = [
            {
                "components": [i + 1 for i in comps],
                "num": v.numerator,
                "den": v.denominator,
            }
            for comps, v in atom.coeff
        ]
        atoms.append({"cells": [c + 1 for c in atom.cells], "orders": orders, "coeff": coeff})
    return {"grid": grid_to_dict(k.grid), "m": k.m, "axes": k.axes, "atoms": atoms}


def kernel_from_dict(d: dict) -> CellOrderedKernel:
    grid = grid_from_dict(d["grid"])
    m, axes = int(d["m"]), int(d["axes"])
    atoms: list[KernelAtom] = []
    for a in d["atoms"]:
        cells = tuple(int(c) - 1 for c in a["cells"])
        orders = {
            int(o["cell"]) - 1: tuple(int(x) - 1 for x in o["axis_sequence"])
            for o in a.get("orders", [])
        }
        coeff = {}
        for e in a["coeff"]:
            comps = tuple(int(i) - 1 for i in e["components"])
            v = Fraction(int(e["num"]), int(e["den"]))
            coeff[comps] = coeff.get(comps, Fraction(0)) + v
        atoms.extend(make_atoms(cells, coeff, orders))
    return CellOrderedKernel(grid, m, axes, tuple(atoms))


def field_to_dict(u: HTensorField) -> dict:
    return {
        "grid": grid_to_dict(u.grid),
        "m": u.m,
        "order_q": u.q,
        "skew": u.skew,
        "levels": [{"p": p, "kernel": kernel_to_dict(k)} for p, k in u.levels],
    }


def field_from_dict(d: dict) -> HTensorField:
    grid = grid_from_dict(d["grid"])
    m, q = int(d["m"]), int(d["order_q"])
    levels = {}
    for lv in d["levels"]:
        k = kernel_from_dict(lv["kernel"])
        if k.grid != grid or k.m != m:
            raise ShapeMismatchError("level kernel disagrees with field grid/m")
        levels[int(lv["p"])] = k
    return field(grid, m, q, levels, skew=None, symmetrize_chaos=False)


def dumps_kernel(k: CellOrderedKernel) -> str:
    return json.dumps(kernel_to_dict(k), **_JSON_KW)


def loads_kernel(s: str) -> CellOrderedKernel:
    return kernel_from_dict(json.loads(s))


def dumps_field(u: HTensorField) -> str:
    return json.dumps(field_to_dict(u), **_JSON_KW)


def loads_field(s: str) -> HTensorField:
    return field_from_dict(json.loads(s))


def save_field(u: HTensorField, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_field(u) + "\n")


def load_field(path: str) -> HTensorField:
    with open(path) as fh:
        return loads_field(fh.read())
