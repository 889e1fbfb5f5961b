"""Parameter sweeps over a base scenario.

Each sweep point builds an independent scenario, so points can be evaluated
concurrently; rows always come back in axis order. A point that fails
validation or evaluation is kept as a failed row instead of aborting.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import IREEError
from .metrics import MetricsReport, Mode, build_snapshot, report
from .radio import BaseStation, RISPanel, Scenario, dbm_to_watts

SweepKind = Literal["se-sweep", "de-sweep", "placement-sweep", "traffic-sigma-sweep"]
SWEEP_KINDS = ("se-sweep", "de-sweep", "placement-sweep", "traffic-sigma-sweep")
AXES = {"x": 0, "y": 1, "z": 2}

Asset = BaseStation | RISPanel


@dataclass(frozen=True)
class SweepSpec:
    """What to vary and over which range.

    * ``se-sweep``: transmit power in dBm of every station of kind ``target``.
    * ``de-sweep``: number of stations of kind ``target`` (rounded to int).
    * ``placement-sweep``: coordinate ``axis`` of every asset in ``assets``,
      which are added on top of the base roster. Satellites keep their
      position since their path loss ignores distance.
    * ``traffic-sigma-sweep``: every traffic component's covariance set to ``value * I``.
    """

    kind: SweepKind
    start: float
    stop: float
    steps: int
    axis: str = "x"
    assets: tuple[Asset, ...] = ()
    target: str = "terrestrial"

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ValueError(f"sweep kind must be one of {SWEEP_KINDS}, got {self.kind!r}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps}")
        if self.steps == 1 and self.start != self.stop:
            raise ValueError("a single-step sweep needs start == stop")
        if self.steps > 1 and not self.start < self.stop:
            raise ValueError(f"sweep range needs start < stop, got {self.start}..{self.stop}")
        if self.kind == "placement-sweep":
            if self.axis not in AXES:
                raise ValueError(f"placement axis must be one of {sorted(AXES)}, got {self.axis!r}")
            if not self.assets:
                raise ValueError("placement sweep needs at least one asset")
        object.__setattr__(self, "assets", tuple(self.assets))

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.steps))

    @property
    def label(self) -> str:
        return {
            "se-sweep": "tx_power_dbm",
            "de-sweep": "station_count",
            "placement-sweep": f"position_{self.axis}",
            "traffic-sigma-sweep": "sigma_d_m2",
        }[self.kind]


@dataclass(frozen=True)
class SweepRow:
    axis: float
    numeric: MetricsReport | None = None
    closed: MetricsReport | None = None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def _lattice(region, n: int, height: float) -> list[np.ndarray]:
    """``n`` horizontal positions on the cells of a ``k x k`` lattice, row-major."""
    k = math.ceil(math.sqrt(n))
    step = region.edges[:2] / k
    out = []
    for i in range(k):
        for j in range(k):
            if len(out) == n:
                return out
            xy = region.lo[:2] + step * (np.array([i, j]) + 0.5)
            out.append(np.array([xy[0], xy[1], height]))
    return out


def scenario_at(base: Scenario, spec: SweepSpec, value: float) -> Scenario:
    """The base scenario modified for one sweep point."""
    if spec.kind == "se-sweep":
        watts = float(dbm_to_watts(value))
        stations = tuple(s.with_tx_power(watts) if s.kind == spec.target else s for s in base.stations)
        return base.replace(stations=stations)
    if spec.kind == "de-sweep":
        count = int(round(value))
        targets = [s for s in base.stations if s.kind == spec.target]
        others = tuple(s for s in base.stations if s.kind != spec.target)
        if not targets:
            raise ValueError(f"no {spec.target} station to replicate")
        if count == len(targets):
            return base
        template = targets[0]
        placed = tuple(template.moved(p) for p in _lattice(base.region, count, template.position[2]))
        return base.replace(stations=placed + others)
    if spec.kind == "placement-sweep":
        idx = AXES[spec.axis]
        stations, ris = list(base.stations), list(base.ris)
        for asset in spec.assets:
            pos = asset.position.copy()
            if not (isinstance(asset, BaseStation) and asset.kind == "satellite"):
                pos[idx] = value
            moved = asset.moved(pos)
            (ris if isinstance(moved, RISPanel) else stations).append(moved)
        return base.replace(stations=tuple(stations), ris=tuple(ris))
    if spec.kind == "traffic-sigma-sweep":
        return base.replace(traffic_gmm=base.traffic_gmm.with_covariance(value * np.eye(3)))
    raise ValueError(spec.kind)


def evaluate_point(scenario: Scenario, modes: Sequence[Mode] = ("numeric", "closed-form")) -> tuple:
    snap = build_snapshot(scenario)
    numeric = report(snap, "numeric") if "numeric" in modes else None
    closed = report(snap, "closed-form") if "closed-form" in modes else None
    return numeric, closed


def _run_point(base, spec, value, modes) -> SweepRow:
    try:
        numeric, closed = evaluate_point(scenario_at(base, spec, value), modes)
    except (IREEError, ValueError, ArithmeticError) as exc:
        return SweepRow(float(value), error=f"{type(exc).__name__}: {exc}")
    return SweepRow(float(value), numeric, closed)


def run_sweep(
    scenario: Scenario,
    spec: SweepSpec,
    modes: Sequence[Mode] = ("numeric", "closed-form"),
    workers: int = 1,
) -> list[SweepRow]:
    """One row per sweep value, in ascending axis order."""
    values = spec.values()
    if workers <= 1:
        return [_run_point(scenario, spec, v, modes) for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda v: _run_point(scenario, spec, v, modes), values))


def _moves(values: Sequence[float], flat_tol: float) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        return np.zeros(0)
    d = np.diff(v)
    return np.sign(d[np.abs(d) > flat_tol * float(np.max(np.abs(v)))])


def direction_changes(values: Sequence[float], flat_tol: float = 1e-9) -> int:
    """Sign changes in the discrete differences of ``values``.

    Differences within ``flat_tol * max|values|`` of zero count as flat and
    are skipped, so float noise on a plateau cannot fake an extra mode.
    """
    return int(np.count_nonzero(np.diff(_moves(values, flat_tol))))


def is_unimodal(values: Sequence[float], flat_tol: float = 1e-9) -> bool:
    """Rises then falls (either part may be empty), ignoring flat steps."""
    moves = _moves(values, flat_tol)
    return moves.size == 0 or direction_changes(values, flat_tol) == 0 or (
        direction_changes(values, flat_tol) == 1 and moves[0] > 0
    )
