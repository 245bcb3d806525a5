"""Rational time grids on [0, T].

A grid is a strictly increasing sequence of rational breakpoints
``0 = t_0 < t_1 < ... < t_n = T``.  Cell ``k`` (0-based) is the interval
``[t_k, t_{k+1})``; all kernel supports and filtration checkpoints are
expressed in terms of these cells, so every volume computed downstream is
an exact rational number.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ConfigError


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise ConfigError(f"grid breakpoints must be rational, got float {x!r}")
    return Fraction(x)


@dataclass(frozen=True)
class TimeGrid:
    """Rational partition of [0, T] into ``n`` half-open cells."""

    breakpoints: tuple[Fraction, ...]

    def __post_init__(self):
        bps = tuple(_as_fraction(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if len(bps) < 2:
            raise ConfigError("grid needs at least one cell (two breakpoints)")
        if bps[0] != 0:
            raise ConfigError("grid must start at 0")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ConfigError("grid breakpoints must be strictly increasing")

    @classmethod
    def from_breakpoints(cls, breakpoints: Iterable) -> "TimeGrid":
        return cls(tuple(_as_fraction(b) for b in breakpoints))

    @classmethod
    def uniform(cls, n_cells: int, horizon=1) -> "TimeGrid":
        if n_cells < 1:
            raise ConfigError("need at least one cell")
        t = _as_fraction(horizon)
        if t <= 0:
            raise ConfigError("horizon must be positive")
        return cls(tuple(t * k / n_cells for k in range(n_cells + 1)))

    @property
    def horizon(self) -> Fraction:
        return self.breakpoints[-1]

    @property
    def n_cells(self) -> int:
        return len(self.breakpoints) - 1

    @property
    def widths(self) -> tuple[Fraction, ...]:
        bps = self.breakpoints
        return tuple(b - a for a, b in zip(bps, bps[1:]))

    def width(self, cell: int) -> Fraction:
        return self.widths[cell]

    def checkpoint(self, k: int) -> Fraction:
        """Time value t_k of checkpoint ``k`` (0 <= k <= n_cells)."""
        return self.breakpoints[k]
