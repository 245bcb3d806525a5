"""Pathwise Monte-Carlo oracle for the exact engine.

Brownian paths are sampled on a refinement of the grid (``R`` sub-steps
per cell) with a counter-based generator (Philox) and inverse-CDF
Gaussians, so every draw is reproducible across platforms.  Multiple
Wiener integrals of kernel atoms are evaluated per path by splitting each
within-cell ordered block across sub-steps (exact concatenation
combinatorics) with two base rules inside a sub-step:

* a block whose components are all equal uses the closed-form simplex
  value ``h^{j/2} He_j(x / sqrt(h)) / j!`` and is pathwise exact, so for
  m = 1 evaluation is exact at every refinement;
* a mixed-component block uses ``prod(increments) / j!``, which carries an
  O(1/R) discretisation bias (iterated integrals of distinct components
  inside one step are not functions of the increments).

Tensor fields are evaluated at parameter points placed on sub-step
boundaries, stratified by a Halton sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.special import ndtri

from .chaos import HTensorField
from .errors import ConfigError, ShapeMismatchError
from .grid import TimeGrid
from .kernels import KernelAtom

Number = (int, float, Fraction)


@dataclass(frozen=True)
class PathSample:
    """One path: per-sub-step m-vector Gaussian increments."""

    seed: int
    refinement: int
    increments: np.ndarray  # (n_substeps, m)


class PathBatch(Sequence):
    """N reproducible paths over a refined grid; indexable as PathSample."""

    def __init__(self, grid: TimeGrid, m: int, refinement: int, n_paths: int, seed: int):
        if refinement < 1 or n_paths < 1:
            raise ConfigError("refinement and path count must be >= 1")
        self.grid = grid
        self.m = m
        self.refinement = refinement
        self.seed = seed
        widths = np.array([float(w) for w in grid.widths], dtype=np.float64)
        sub = np.repeat(widths / refinement, refinement)
        self.subwidths = sub
        self.n_substeps = sub.size
        gen = np.random.Generator(np.random.Philox(key=seed))
        u = gen.random((n_paths, self.n_substeps, m), dtype=np.float64)
        u = np.clip(u, 1e-16, 1.0 - 1e-16)
        self.increments = ndtri(u) * np.sqrt(sub)[None, :, None]
        self._block_cache: dict = {}

    def __len__(self) -> int:
        return self.increments.shape[0]

    def __getitem__(self, i: int) -> PathSample:
        return PathSample(self.seed, self.refinement, self.increments[i])

    def substeps_of_cell(self, cell: int) -> tuple[int, int]:
        r = self.refinement
        return cell * r, (cell + 1) * r


def sample_paths(grid: TimeGrid, m: int, refinement: int, n_paths: int, seed: int) -> PathBatch:
    return PathBatch(grid, m, refinement, n_paths, seed)


def _hermite_simplex(x: np.ndarray, h: float, j: int) -> np.ndarray:
    """h^{j/2} He_j(x/sqrt(h)) / j! via the stable three-term recurrence."""
    if j == 0:
        return np.ones_like(x)
    prev, cur = np.ones_like(x), x.copy()
    for k in range(2, j + 1):
        prev, cur = cur, (x * cur - h * prev) / k
    return cur


def _substep_block(batch: PathBatch, s: int, word: tuple[int, ...]) -> np.ndarray:
    """Ordered iterated integral of the component word over one sub-step."""
    j = len(word)
    if j == 0:
        return np.ones(len(batch))
    if j == 1:
        return batch.increments[:, s, word[0]]
    if all(c == word[0] for c in word):
        return _hermite_simplex(batch.increments[:, s, word[0]], batch.subwidths[s], j)
    out = batch.increments[:, s, word[0]].copy()
    for c in word[1:]:
        out = out * batch.increments[:, s, c]
    return out / math.factorial(j)


def _window_block(batch: PathBatch, lo: int, hi: int, word: tuple[int, ...]) -> np.ndarray:
    """Ordered iterated integral over sub-steps [lo, hi) by concatenation."""
    key = (lo, hi, word)
    cached = batch._block_cache.get(key)
    if cached is not None:
        return cached
    L = len(word)
    state = [np.ones(len(batch))] + [np.zeros(len(batch)) for _ in range(L)]
    for s in range(lo, hi):
        new = [state[0]]
        for ell in range(1, L + 1):
            acc = state[ell].copy()
            for k in range(ell):
                acc += state[k] * _substep_block(batch, s, word[k:ell])
            new.append(acc)
        state = new
    batch._block_cache[key] = state[L]
    return state[L]


def _atom_cells(atom: KernelAtom, axes: Sequence[int]) -> dict[int, list[int]]:
    """Cell -> the given axes mapped there, in chain (time) order."""
    by_cell: dict[int, list[int]] = {}
    for a in axes:
        by_cell.setdefault(atom.cells[a], []).append(a)
    out = {}
    for cell, axs in by_cell.items():
        chain = atom.chain_of_cell(cell)
        if chain is None:
            out[cell] = axs
        else:
            out[cell] = [a for a in chain if a in set(axs)]
    return out


def evaluate(f: HTensorField, paths: "PathBatch | PathSample") -> np.ndarray | float:
    """Pathwise values of a random scalar (order-0 field).

    Returns a float for a single path, else an array over the batch.
    """
    if f.q != 0:
        raise ShapeMismatchError("evaluate handles order-0 fields; use evaluate_field")
    single = isinstance(paths, PathSample)
    batch = _as_batch(f, paths)
    total = np.zeros(len(batch))
    for p, k in f.levels:
        chaos = tuple(range(p))
        for atom in k.atoms:
            cells = _atom_cells(atom, chaos)
            for comps, val in atom.coeff:
                term = float(val) * np.ones(len(batch))
                for cell, axs in cells.items():
                    lo, hi = batch.substeps_of_cell(cell)
                    word = tuple(comps[a] for a in axs)
                    term = term * _window_block(batch, lo, hi, word)
                total += term
    return float(total[0]) if single else total


def _as_batch(f: HTensorField, paths) -> PathBatch:
    if isinstance(paths, PathBatch):
        if paths.grid != f.grid or paths.m != f.m:
            raise ShapeMismatchError("paths were sampled for a different grid or m")
        return paths
    if isinstance(paths, PathSample):
        batch = PathBatch.__new__(PathBatch)
        batch.grid = f.grid
        batch.m = f.m
        batch.refinement = paths.refinement
        batch.seed = paths.seed
        widths = np.array([float(w) for w in f.grid.widths])
        batch.subwidths = np.repeat(widths / paths.refinement, paths.refinement)
        batch.n_substeps = batch.subwidths.size
        batch.increments = paths.increments[None, :, :]
        batch._block_cache = {}
        return batch
    raise TypeError("expected PathBatch or PathSample")


def halton(index: int, base: int) -> float:
    """Radical-inverse of ``index`` in the given base."""
    f, r = 1.0, 0.0
    while index > 0:
        f /= base
        r += f * (index % base)
        index //= base
    return r


_BASES = (2, 3, 5, 7, 11, 13)


def halton_parameter_points(q: int, n_points: int, n_slots: int, start: int = 1) -> list[tuple[int, ...]]:
    """Parameter tuples on sub-step boundaries (indices 1..n_slots),
    Halton-stratified, with distinct coordinates within each tuple."""
    if q > n_slots:
        raise ConfigError(f"need at least q={q} sub-step boundaries, have {n_slots}")
    points = []
    idx = start
    while len(points) < n_points:
        raw = [int(halton(idx, _BASES[k]) * n_slots) + 1 for k in range(q)]
        seen: set[int] = set()
        for k in range(q):
            b = raw[k]
            while b in seen:
                b = b % n_slots + 1
            seen.add(b)
            raw[k] = b
        points.append(tuple(raw))
        idx += 1
    return points


def evaluate_field(u: HTensorField, paths, points: Sequence[tuple[int, ...]]) -> np.ndarray:
    """Pathwise field values at boundary-index parameter points.

    Returns an array of shape (n_points, n_paths, m**q); the last axis is
    the row-major tensor entry over the q param components.  A point
    coordinate ``b`` means the time of sub-step boundary ``b`` (the top of
    sub-step ``b - 1``), so it belongs to the cell containing that
    sub-step.
    """
    if u.q == 0:
        vals = evaluate(u, paths)
        return np.asarray(vals)[None, :, None]
    batch = _as_batch(u, paths)
    r = batch.refinement
    n_entries = u.m ** u.q
    out = np.zeros((len(points), len(batch), n_entries))
    for pi, point in enumerate(points):
        if len(set(point)) != len(point):
            raise ConfigError("parameter point has tied coordinates")
        cells_of_point = tuple((b - 1) // r for b in point)
        for p, k in u.levels:
            chaos = u.chaos_axes(p)
            for atom in k.atoms:
                if tuple(atom.cells[a] for a in range(u.q)) != cells_of_point:
                    continue
                windows = _param_windows(atom, u.q, chaos, point, batch)
                if windows is None:
                    continue
                for comps, val in atom.coeff:
                    entry = 0
                    for a in range(u.q):
                        entry = entry * u.m + comps[a]
                    term = float(val) * np.ones(len(batch))
                    for (lo, hi, axs) in windows:
                        word = tuple(comps[a] for a in axs)
                        term = term * _window_block(batch, lo, hi, word)
                    out[pi, :, entry] += term
    return out


def _param_windows(atom: KernelAtom, q: int, chaos: tuple[int, ...], point, batch):
    """Sub-step windows for each run of chaos axes, or None if the atom's
    within-cell order of param axes contradicts the point."""
    r = batch.refinement
    by_cell: dict[int, list[int]] = {}
    for a in range(q + len(chaos)):
        by_cell.setdefault(atom.cells[a], []).append(a)
    windows = []
    for cell, axs in sorted(by_cell.items()):
        chain = atom.chain_of_cell(cell)
        ordered = chain if chain is not None else tuple(axs)
        lo = cell * r
        cell_end = (cell + 1) * r
        run: list[int] = []
        last_param_b = None
        for a in ordered:
            if a < q:
                b = point[a]
                if last_param_b is not None and b <= last_param_b:
                    return None
                if run:
                    windows.append((lo, b, tuple(run)))
                    run = []
                lo = b
                last_param_b = b
            else:
                run.append(a)
        if run:
            windows.append((lo, cell_end, tuple(run)))
    return windows


def pairwise_sum(values: np.ndarray) -> float:
    """Deterministic pairwise (tree) summation."""
    vals = np.asarray(values, dtype=np.float64)
    n = vals.size
    if n == 0:
        return 0.0
    while n > 1:
        half = n // 2
        vals = np.concatenate([vals[:half] + vals[half : 2 * half], vals[2 * half : n]])
        n = vals.size
    return float(vals[0])


@dataclass(frozen=True)
class MCCheckResult:
    identity: str
    n_paths: int
    refinement: int
    seed: int
    mean: float
    std: float
    threshold: float
    bias_allowance: float
    max_abs: float
    rel_max: float
    passed: bool

    def stats(self) -> dict:
        return {
            "n_paths": self.n_paths,
            "refinement": self.refinement,
            "seed": self.seed,
            "mean": self.mean,
            "std": self.std,
            "threshold": self.threshold,
            "bias_allowance": self.bias_allowance,
            "max_abs": self.max_abs,
            "rel_max": self.rel_max,
        }


def _eval_side(side, batch: PathBatch, points) -> np.ndarray:
    if isinstance(side, HTensorField):
        if side.q == 0:
            return evaluate(side, batch)[None, :, None]
        return evaluate_field(side, batch, points)
    if isinstance(side, Number):
        return np.full((1, len(batch), 1), float(side))
    if callable(side):
        return np.asarray(side(batch))[None, :, None]
    raise TypeError(f"cannot evaluate {type(side).__name__} pathwise")


def mc_check(
    lhs,
    rhs,
    *,
    grid: TimeGrid,
    m: int,
    n_paths: int,
    refinement: int,
    seed: int,
    n_points: int = 8,
    bias_coeff: float = 1.0,
    identity: str = "",
) -> MCCheckResult:
    """Statistical comparison of paired pathwise evaluations.

    Passes when the mean paired difference is within four CLT standard
    errors plus a discretisation allowance ``bias_coeff * scale / R``.
    Fields are compared entrywise at Halton-stratified parameter points.
    """
    q = 0
    for side in (lhs, rhs):
        if isinstance(side, HTensorField):
            if side.grid != grid or side.m != m:
                raise ShapeMismatchError("operand does not match the sampling grid/m")
            q = max(q, side.q)
    for side in (lhs, rhs):
        if isinstance(side, HTensorField) and side.q not in (q,):
            raise ShapeMismatchError("operands have different orders")
    batch = sample_paths(grid, m, refinement, n_paths, seed)
    points = (
        halton_parameter_points(q, n_points, batch.n_substeps) if q >= 1 else [()]
    )
    a = _eval_side(lhs, batch, points)
    b = _eval_side(rhs, batch, points)
    diffs = a - b
    per_path = diffs.mean(axis=(0, 2))
    mean = pairwise_sum(per_path) / n_paths
    std = float(np.std(per_path, ddof=1)) if n_paths > 1 else 0.0
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    allowance = bias_coeff * scale / refinement
    threshold = 4.0 * std / math.sqrt(n_paths) + allowance
    max_abs = float(np.max(np.abs(diffs))) if diffs.size else 0.0
    return MCCheckResult(
        identity=identity,
        n_paths=n_paths,
        refinement=refinement,
        seed=seed,
        mean=mean,
        std=std,
        threshold=threshold,
        bias_allowance=allowance,
        max_abs=max_abs,
        rel_max=max_abs / scale,
        passed=abs(mean) <= threshold,
    )


def pathwise_square(f: HTensorField) -> Callable[[PathBatch], np.ndarray]:
    """Pathwise F^2 as a callable, for moment-versus-sample bias studies."""

    def fn(batch: PathBatch) -> np.ndarray:
        v = evaluate(f, batch)
        return v * v

    return fn
