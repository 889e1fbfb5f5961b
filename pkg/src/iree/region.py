"""Axis-aligned evaluation region and its regular grid."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True, eq=False)
class Box:
    """Axis-aligned box ``[lo, hi]`` in meters."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lo, dtype=float).reshape(3)
        hi = np.array(self.hi, dtype=float).reshape(3)
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("region corners must be finite")
        if np.any(hi <= lo):
            raise ValueError(f"region must have positive volume, got lo={lo}, hi={hi}")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def cube(cls, edge: float, origin=(0.0, 0.0, 0.0)) -> Box:
        origin = np.asarray(origin, dtype=float)
        return cls(origin, origin + edge)

    @property
    def edges(self) -> np.ndarray:
        return self.hi - self.lo

    @property
    def max_edge(self) -> float:
        return float(self.edges.max())

    @property
    def volume(self) -> float:
        return float(np.prod(self.edges))

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    def scaled(self, factor: float) -> Box:
        """Box with every edge multiplied by ``factor`` about the same center."""
        half = 0.5 * factor * self.edges
        return Box(self.center - half, self.center + half)

    def same_as(self, other: Box) -> bool:
        return bool(np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi))

    def __eq__(self, other):
        return isinstance(other, Box) and self.same_as(other)

    def __hash__(self):
        return hash((tuple(self.lo), tuple(self.hi)))


@dataclass(frozen=True)
class Grid:
    """Regular ``dims[0] x dims[1] x dims[2]`` cell grid over a box."""

    region: Box
    dims: tuple[int, int, int]

    def __post_init__(self):
        dims = tuple(int(n) for n in np.broadcast_to(self.dims, (3,)))
        if min(dims) < 1:
            raise ValueError(f"grid dims must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def size(self) -> int:
        return int(np.prod(self.dims))

    @property
    def spacing(self) -> np.ndarray:
        return self.region.edges / np.asarray(self.dims)

    @property
    def cell_volume(self) -> float:
        return self.region.volume / self.size

    def axis_centers(self, axis: int) -> np.ndarray:
        n = self.dims[axis]
        h = self.region.edges[axis] / n
        return self.region.lo[axis] + h * (np.arange(n) + 0.5)

    @cached_property
    def centers(self) -> np.ndarray:
        """Cell-center coordinates, shape ``(size, 3)``, C order matching ``values.ravel()``."""
        x, y, z = (self.axis_centers(i) for i in range(3))
        pts = np.stack(np.meshgrid(x, y, z, indexing="ij"), axis=-1).reshape(-1, 3)
        pts.flags.writeable = False
        return pts
