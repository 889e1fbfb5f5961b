"""Energy-efficiency metrics and the IREE-based green trade-offs.

Scenario-level metrics take a :class:`Snapshot`, which holds the gridded
fields and totals of one scenario so they are built once and shared. The
trade-off relations (``se_iree``, ``de_iree``, ``ris_iree``,
``sagin_iree_bound``) are plain functions of totals and divergences.

Units: capacities and traffic in bits per epoch, energy ``p_tot`` in joules,
efficiencies in bit/J.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

import numpy as np

from .divergence import DivergenceResult, js_closed_form, js_numeric, js_ris_mixture
from .errors import DegenerateScenarioError, EmptyFieldError
from .field import GridField, build_capacity_field, build_traffic_field, normalize_field
from .gmm import SpatialGMM, fit_gmm_moment_match
from .radio import Scenario, total_bandwidth, total_power

Mode = Literal["numeric", "closed-form"]


@dataclass(frozen=True)
class CostModel:
    """Fixed cost ``capex_total`` per epoch and OpEx factor ``opex_factor`` per joule."""

    capex_total: float
    opex_factor: float

    def __post_init__(self):
        if self.capex_total < 0 or self.opex_factor < 0:
            raise ValueError("costs must be nonnegative")

    def total(self, p_tot: float) -> float:
        return self.capex_total + self.opex_factor * p_tot


def cost_model(scenario: Scenario) -> CostModel:
    assets = list(scenario.stations) + list(scenario.ris)
    capex = sum(a.capex_rate for a in assets) * scenario.epoch
    return CostModel(capex, scenario.opex_factor)


@dataclass(frozen=True, eq=False)
class Snapshot:
    """Gridded fields and totals of one scenario."""

    scenario: Scenario
    capacity: GridField
    parts: tuple[GridField, ...]
    traffic: GridField

    @property
    def c_tot(self) -> float:
        return self.capacity.total()

    @property
    def d_tot(self) -> float:
        return self.traffic.total()

    @property
    def p_tot(self) -> float:
        """Energy over the epoch in joules."""
        return total_power(self.scenario) * self.scenario.epoch

    @property
    def b_tot(self) -> float:
        return total_bandwidth(self.scenario)

    @property
    def volume(self) -> float:
        return self.scenario.region.volume

    @cached_property
    def capacity_density(self) -> GridField:
        return normalize_field(self.capacity)

    @cached_property
    def traffic_density(self) -> GridField:
        return normalize_field(self.traffic)

    @cached_property
    def capacity_gmm(self) -> SpatialGMM:
        return fit_gmm_moment_match(self.capacity, self.parts)

    @cached_property
    def xi_numeric(self) -> DivergenceResult:
        self._require_mass()
        return js_numeric(self.capacity_density, self.traffic_density)

    @cached_property
    def xi_closed(self) -> DivergenceResult:
        self._require_mass()
        return js_closed_form(self.capacity_gmm, self.scenario.traffic_gmm)

    def xi(self, mode: Mode) -> DivergenceResult:
        if mode == "numeric":
            return self.xi_numeric
        if mode == "closed-form":
            return self.xi_closed
        raise ValueError(f"unknown mode {mode!r}")

    def _require_mass(self):
        if not self.c_tot > 0:
            raise DegenerateScenarioError("scenario has zero total capacity")


def build_snapshot(scenario: Scenario) -> Snapshot:
    capacity, parts = build_capacity_field(scenario)
    traffic = build_traffic_field(scenario)
    return Snapshot(scenario, capacity, tuple(parts), traffic)


def _ratio(num: float, den: float, what: str) -> float:
    if not den > 0:
        raise DegenerateScenarioError(f"{what} is zero")
    return num / den


def ee(snap: Snapshot) -> float:
    """Classical bit-per-joule efficiency ``C_Tot / P_Tot``."""
    return _ratio(snap.c_tot, snap.p_tot, "total power")


def aee(snap: Snapshot) -> float:
    """EE per cubic meter of the evaluated region."""
    return ee(snap) / snap.volume


def iee_numeric(snap: Snapshot) -> float:
    """Cell-wise ``sum min(capacity, traffic) / P_Tot``."""
    served = float(np.minimum(snap.capacity.values, snap.traffic.values).sum())
    return _ratio(served, snap.p_tot, "total power")


def smoothed_utility_values(capacity: np.ndarray, traffic: np.ndarray) -> float:
    """Smoothed served traffic from raw capacity and traffic cell values.

    Both fields are divided by ``max(C_Tot, D_Tot)`` and the cell-wise
    ``min`` is replaced by
    ``1/2 a log2(1 + b/a) + 1/2 b log2(1 + a/b)``, which vanishes whenever
    either side does.
    """
    a = np.asarray(capacity, dtype=float).ravel()
    b = np.asarray(traffic, dtype=float).ravel()
    top = max(a.sum(), b.sum())
    if not (a.sum() > 0 and b.sum() > 0):
        raise EmptyFieldError("smoothed utility needs positive capacity and traffic")
    a, b = a / top, b / top
    both = (a > 0) & (b > 0)
    a, b = a[both], b[both]
    s = 0.5 * a * np.log2(1.0 + b / a) + 0.5 * b * np.log2(1.0 + a / b)
    return float(top * s.sum())


def smoothed_utility(snap: Snapshot) -> float:
    return smoothed_utility_values(snap.capacity.values, snap.traffic.values)


def iree_value(c_tot: float, d_tot: float, p_tot: float, xi: float) -> float:
    """``min(C_Tot, D_Tot) (1 - xi) / P_Tot``."""
    if not (c_tot > 0 and d_tot > 0 and p_tot > 0):
        raise DegenerateScenarioError(
            f"IREE needs positive totals, got C={c_tot}, D={d_tot}, P={p_tot}"
        )
    return min(c_tot, d_tot) * (1.0 - xi) / p_tot


def iree(snap: Snapshot, mode: Mode = "numeric") -> float:
    return iree_value(snap.c_tot, snap.d_tot, snap.p_tot, snap.xi(mode).value)


def se(snap: Snapshot) -> float:
    """Spectral efficiency ``C_Tot / (epoch * B_Tot)`` in bit/s/Hz."""
    return _ratio(snap.c_tot, snap.scenario.epoch * snap.b_tot, "total bandwidth")


def se_iree(se_value: float, b_tot: float, d_tot: float, p_tot: float, xi: float, epoch: float) -> float:
    """IREE written through spectral efficiency."""
    return min(b_tot * se_value * epoch, d_tot) * (1.0 - xi) / p_tot


def de(snap: Snapshot, cost: CostModel | None = None) -> float:
    """Deployment efficiency ``C_Tot / (W_Cap + gamma P_Tot)`` in bit per currency unit."""
    cost = cost or cost_model(snap.scenario)
    return _ratio(snap.c_tot, cost.total(snap.p_tot), "total cost")


def de_iree(de_value: float, capex_total: float, opex_factor: float, d_tot: float, p_tot: float, xi: float) -> float:
    """IREE written through deployment efficiency."""
    return min((capex_total + opex_factor * p_tot) * de_value, d_tot) * (1.0 - xi) / p_tot


def ris_iree(
    c: SpatialGMM,
    c_tot: float,
    p_tot: float,
    d: SpatialGMM,
    d_tot: float,
    r: SpatialGMM,
    dc_tot: float,
    dp: float,
) -> float:
    """Closed-form IREE with an RIS capacity increment.

    ``dp`` is the extra energy in joules over the epoch.
    """
    if dc_tot < 0 or dp < 0:
        raise ValueError("RIS increments must be nonnegative")
    xi = js_ris_mixture(c, r, d, c_tot, dc_tot).value
    return min(c_tot + dc_tot, d_tot) * (1.0 - xi) / (p_tot + dp)


def sagin_iree_bound(
    xi_t: float,
    c_t_tot: float,
    p_t_tot: float,
    xi_overlay: float,
    dc_tot: float,
    dp_tot: float,
    d_tot: float,
) -> float:
    """Lower bound on IREE for terrestrial capacity plus an airborne/satellite overlay."""
    for x in (xi_t, xi_overlay):
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"divergence must lie in [0, 1], got {x}")
    if min(c_t_tot, p_t_tot, dc_tot, dp_tot, d_tot) < 0:
        raise ValueError("totals must be nonnegative")
    pooled = c_t_tot + dc_tot
    energy = p_t_tot + dp_tot
    if not (pooled > 0 and energy > 0):
        raise DegenerateScenarioError("pooled capacity or energy is zero")
    served = c_t_tot * (1.0 - xi_t) + dc_tot * (1.0 - xi_overlay)
    return min(1.0, d_tot / pooled) * served / energy


@dataclass(frozen=True)
class MetricsReport:
    ee: float
    aee: float
    iee: float
    iree: float
    se: float
    de: float
    xi: float
    c_tot: float
    d_tot: float
    p_tot: float
    mode: Mode = "numeric"
    clamped: bool = False
    extras: dict = field(default_factory=dict, compare=False)


def report(snap: Snapshot, mode: Mode = "numeric") -> MetricsReport:
    xi = snap.xi(mode)
    return MetricsReport(
        ee=ee(snap),
        aee=aee(snap),
        iee=iee_numeric(snap),
        iree=iree_value(snap.c_tot, snap.d_tot, snap.p_tot, xi.value),
        se=se(snap),
        de=de(snap),
        xi=xi.value,
        c_tot=snap.c_tot,
        d_tot=snap.d_tot,
        p_tot=snap.p_tot,
        mode=mode,
        clamped=xi.clamped,
    )


def evaluate(scenario: Scenario, mode: Mode = "numeric") -> MetricsReport:
    return report(build_snapshot(scenario), mode)
