"""Gridded capacity and traffic fields over the evaluation region.

Every field stores one nonnegative value per cell of a regular midpoint grid.
Capacity and traffic fields hold bits per epoch per cell, so their sums are
the totals ``C_Tot`` and ``D_Tot``; normalized fields sum to one.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import IO

import numpy as np

from .errors import EmptyFieldError
from .gmm import pdf
from .radio import Scenario, link_capacity, received_power
from .region import Box, Grid


@dataclass(frozen=True, eq=False)
class GridField:
    """Nonnegative per-cell values on ``grid``; ``values`` has shape ``grid.dims``."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.dims:
            if values.size != self.grid.size:
                raise ValueError(f"{values.size} values for a grid of {self.grid.size} cells")
            values = values.reshape(self.grid.dims)
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        if np.any(values < 0):
            raise ValueError("field values must be nonnegative")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def region(self) -> Box:
        return self.grid.region

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.grid.dims

    @property
    def cell_volume(self) -> float:
        return self.grid.cell_volume

    def total(self) -> float:
        return float(self.values.sum())

    def scaled(self, k: float) -> GridField:
        return GridField(self.grid, self.values * k)

    def __add__(self, other: GridField) -> GridField:
        if other.grid != self.grid:
            raise ValueError("cannot add fields on different grids")
        return GridField(self.grid, self.values + other.values)


def scenario_grid(scenario: Scenario) -> Grid:
    return Grid(scenario.region, (scenario.grid_resolution,) * 3)


def normalize_field(field: GridField) -> GridField:
    """Divide by the total so the cells sum to one."""
    total = field.total()
    if not total > 0:
        raise EmptyFieldError("cannot normalize a field with zero total mass")
    return GridField(field.grid, field.values / total)


def capacity_parts(scenario: Scenario, grid: Grid | None = None) -> list[GridField]:
    """Per-asset capacity fields: one per station, then one per RIS panel.

    A cell holds ``rate(center) * receiver_density * cell_volume * epoch`` bits.
    RIS panels spread ``delta_rate * epoch`` bits over the cells in proportion
    to their footprint density.
    """
    grid = grid or scenario_grid(scenario)
    pts = grid.centers
    weight = scenario.receiver_density * grid.cell_volume * scenario.epoch
    stations = scenario.stations
    parts = []
    if scenario.interference_mode == "co-channel-sum" and len(stations) > 1:
        rx = np.stack([received_power(s, pts) for s in stations])
        total_rx = rx.sum(axis=0)
        for i, s in enumerate(stations):
            rate = link_capacity(s, pts, scenario.noise_psd, interference=total_rx - rx[i])
            parts.append(GridField(grid, rate * weight))
    else:
        for s in stations:
            parts.append(GridField(grid, link_capacity(s, pts, scenario.noise_psd) * weight))
    for panel in scenario.ris:
        shape = pdf(panel.gmm, pts)
        mass = shape.sum()
        bits = panel.delta_rate * scenario.epoch
        values = shape * (bits / mass) if mass > 0 and bits > 0 else np.zeros_like(shape)
        parts.append(GridField(grid, values))
    return parts


def build_capacity_field(scenario: Scenario, grid: Grid | None = None) -> tuple[GridField, list[GridField]]:
    """Total capacity field and its per-asset decomposition."""
    grid = grid or scenario_grid(scenario)
    parts = capacity_parts(scenario, grid)
    total = np.zeros(grid.dims)
    for p in parts:
        total += p.values
    return GridField(grid, total), parts


def build_traffic_field(scenario: Scenario, grid: Grid | None = None) -> GridField:
    """Traffic GMM sampled at cell centers, renormalized inside the region to ``traffic_total`` bits."""
    grid = grid or scenario_grid(scenario)
    mass = pdf(scenario.traffic_gmm, grid.centers) * grid.cell_volume
    total = mass.sum()
    if not total > 0:
        raise EmptyFieldError("traffic GMM has no mass inside the region")
    return GridField(grid, mass * (scenario.traffic_total / total))


def density_on_grid(gmm, grid: Grid) -> GridField:
    """Mixture mass per cell via the midpoint rule, normalized to sum to one."""
    mass = pdf(gmm, grid.centers) * grid.cell_volume
    if not mass.sum() > 0:
        raise EmptyFieldError("mixture has no mass on the grid")
    return GridField(grid, mass / mass.sum())


def write_field_csv(field: GridField, out: str | Path | IO[str]) -> None:
    """Write ``x,y,z,value`` rows, one per cell, in C order."""
    def _write(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "z", "value"])
        for (x, y, z), v in zip(field.grid.centers, field.values.ravel()):
            writer.writerow([f"{x:.9g}", f"{y:.9g}", f"{z:.9g}", f"{v:.9g}"])

    if hasattr(out, "write"):
        _write(out)
    else:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            _write(fh)


def bounding_grid(mixtures, resolution: int = 64, n_sigma: float = 8.0) -> Grid:
    """Grid with ``resolution`` cells per axis covering ``n_sigma`` standard deviations of every component."""
    lo = np.full(3, np.inf)
    hi = np.full(3, -np.inf)
    for gmm in mixtures:
        for g in gmm.gaussians:
            half = n_sigma * np.sqrt(np.diag(g.cov))
            lo = np.minimum(lo, g.mean - half)
            hi = np.maximum(hi, g.mean + half)
    return Grid(Box(lo, hi), (resolution,) * 3)
