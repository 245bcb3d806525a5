"""Seeded generation of sparse random test fields.

Fields are drawn with small-integer coefficients, a couple of atoms per
chaos level, and alternated over their param axes when a skew instance is
requested.  Generation is deterministic in the seed (stdlib Mersenne
Twister, stable across platforms).
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import kernels as kn
from .chaos import HTensorField, alternate_params, field
from .grid import TimeGrid


def generate_field(
    grid: TimeGrid,
    m: int,
    q: int,
    p_max: int,
    seed: int,
    skew: bool = True,
    atoms_per_level: int = 2,
    coeff_bound: int = 3,
) -> HTensorField:
    """Random sparse field; nonzero by construction (the seed is advanced
    deterministically if alternation happens to cancel everything)."""
    for attempt in range(64):
        rnd = random.Random(f"{seed}:{attempt}")
        levels = {}
        for p in range(p_max + 1):
            a_count = q + p
            atoms = []
            for _ in range(atoms_per_level):
                cells = tuple(rnd.randrange(grid.n_cells) for _ in range(a_count))
                comps = tuple(rnd.randrange(m) for _ in range(a_count))
                val = rnd.choice([c for c in range(-coeff_bound, coeff_bound + 1) if c])
                by_cell: dict[int, list[int]] = {}
                for a, c in enumerate(cells):
                    by_cell.setdefault(c, []).append(a)
                orders = {}
                for c, axs in by_cell.items():
                    # mostly draw a strict chain; leave some cells unordered
                    # so canonical expansion is exercised too
                    if len(axs) >= 2 and rnd.random() < 0.75:
                        rnd.shuffle(axs)
                        orders[c] = tuple(axs)
                atoms.extend(kn.make_atoms(cells, {comps: Fraction(val)}, orders))
            levels[p] = kn.CellOrderedKernel(grid, m, a_count, tuple(atoms))
        out = field(grid, m, q, levels)
        if skew and q >= 2:
            out = alternate_params(out)
        if not out.is_zero():
            return out
    raise RuntimeError("could not generate a nonzero field")  # pragma: no cover
