import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from wienerforms import CellOrderedKernel, TimeGrid, make_atoms

GRIDS = [
    TimeGrid.uniform(1),
    TimeGrid.uniform(2),
    TimeGrid.from_breakpoints([0, Fraction(1, 3), 1]),
]


@pytest.fixture
def unit_grid():
    return TimeGrid.uniform(1)


@pytest.fixture
def two_cell_grid():
    return TimeGrid.from_breakpoints([0, Fraction(1, 2), 1])


@st.composite
def kernels(draw, axes=None, m=None, grid=None, max_atoms=3):
    g = grid or draw(st.sampled_from(GRIDS))
    mm = m or draw(st.integers(1, 2))
    a_count = draw(st.integers(0, 3)) if axes is None else axes
    n_atoms = draw(st.integers(0, max_atoms))
    atoms = []
    for _ in range(n_atoms):
        cells = tuple(
            draw(st.integers(0, g.n_cells - 1)) for _ in range(a_count)
        )
        comps = tuple(draw(st.integers(0, mm - 1)) for _ in range(a_count))
        val = draw(st.sampled_from([-3, -2, -1, 1, 2, 3]))
        by_cell = {}
        for ax, c in enumerate(cells):
            by_cell.setdefault(c, []).append(ax)
        orders = {}
        for c, axs in by_cell.items():
            if len(axs) >= 2 and draw(st.booleans()):
                orders[c] = tuple(draw(st.permutations(axs)))
        atoms.extend(make_atoms(cells, {comps: Fraction(val)}, orders))
    return CellOrderedKernel(g, mm, a_count, tuple(atoms))


@st.composite
def kernel_pairs(draw, axes=None):
    k1 = draw(kernels(axes=axes))
    k2 = draw(kernels(axes=k1.axes, m=k1.m, grid=k1.grid))
    return k1, k2
