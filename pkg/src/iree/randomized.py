"""Seeded random scenarios for property tests and ``iree eval random --seed N``."""

from __future__ import annotations

import numpy as np

from .gmm import Gaussian3, SpatialGMM
from .radio import (
    SATELLITE_PATHLOSS,
    TERRESTRIAL_LOS,
    TERRESTRIAL_NLOS,
    UAV_PATHLOSS,
    BaseStation,
    Scenario,
    dbm_to_watts,
)
from .region import Box


def random_covariance(rng: np.random.Generator, scale: float, anisotropic: bool = True) -> np.ndarray:
    """SPD matrix with eigenvalues in ``scale**2 * [0.25, 1]``, randomly rotated if anisotropic."""
    if not anisotropic:
        return (scale * rng.uniform(0.5, 1.0)) ** 2 * np.eye(3)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    eig = (scale * rng.uniform(0.5, 1.0, size=3)) ** 2
    cov = q @ np.diag(eig) @ q.T
    return 0.5 * (cov + cov.T)


def random_gmm(rng: np.random.Generator, region: Box, max_components: int = 3) -> SpatialGMM:
    k = int(rng.integers(1, max_components + 1))
    weights = rng.dirichlet(np.ones(k))
    comps = []
    for w in weights:
        mean = rng.uniform(region.lo + 0.2 * region.edges, region.hi - 0.2 * region.edges)
        cov = random_covariance(rng, rng.uniform(0.08, 0.3) * region.max_edge, bool(rng.integers(2)))
        comps.append((w, Gaussian3(mean, cov)))
    return SpatialGMM(tuple(comps))


def random_station(rng: np.random.Generator, region: Box, kind: str | None = None) -> BaseStation:
    kind = kind or str(rng.choice(["terrestrial", "airborne", "satellite"]))
    xy = rng.uniform(region.lo[:2], region.hi[:2])
    height = {
        "terrestrial": rng.uniform(10, 50),
        "airborne": rng.uniform(50, 300),
        "satellite": rng.uniform(300e3, 800e3),
    }[kind]
    pathloss = {
        "terrestrial": TERRESTRIAL_LOS if rng.integers(2) else TERRESTRIAL_NLOS,
        "airborne": UAV_PATHLOSS,
        "satellite": SATELLITE_PATHLOSS,
    }[kind]
    return BaseStation(
        kind=kind,
        position=np.array([xy[0], xy[1], region.lo[2] + height]),
        tx_power=float(dbm_to_watts(rng.uniform(20, 45))),
        bandwidth=float(rng.choice([5e6, 10e6, 20e6, 40e6])),
        circuit_power=float(rng.uniform(0.5, 5.0)),
        pathloss=pathloss,
        idle_power=float(rng.uniform(0, 1.0)),
        idle_prob=float(rng.uniform(0, 0.5)),
        amp_efficiency=float(rng.uniform(1.0, 4.0)),
        hover_power=0.0 if kind == "terrestrial" else float(rng.uniform(0, 50)),
        antenna_gain=12.0 if kind == "satellite" else 0.0,
        capex_rate=float(rng.uniform(0, 1e-2)),
    )


def random_scenario(rng: np.random.Generator | int, grid: int = 16, max_stations: int = 3) -> Scenario:
    """A small, valid scenario drawn from ``rng`` (or a seed)."""
    rng = np.random.default_rng(rng)
    region = Box.cube(float(rng.uniform(300, 1500)))
    n = int(rng.integers(1, max_stations + 1))
    stations = tuple(random_station(rng, region) for _ in range(n))
    return Scenario(
        region=region,
        traffic_gmm=random_gmm(rng, region),
        traffic_total=float(10 ** rng.uniform(13, 18)),
        stations=stations,
        grid_resolution=grid,
        epoch=float(rng.choice([60.0, 3600.0])),
        name="random",
    )
