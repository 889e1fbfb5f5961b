"""Link-level radio models: path loss, Shannon link capacity and station power.

All arithmetic is linear scale (W, Hz, W/Hz). dB, dBm and dBi only appear in
the conversion helpers and in :class:`PathlossModel` parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

from .gmm import Gaussian3, SpatialGMM
from .region import Box

StationKind = Literal["terrestrial", "airborne", "satellite"]
InterferenceMode = Literal["none", "co-channel-sum"]

STATION_KINDS = ("terrestrial", "airborne", "satellite")
INTERFERENCE_MODES = ("none", "co-channel-sum")
MIN_DISTANCE_M = 1.0
MIN_GRID_RESOLUTION = 4
SECONDS_PER_HOUR = 3600.0
SECONDS_PER_YEAR = 365.0 * 24.0 * SECONDS_PER_HOUR
JOULES_PER_KWH = 3.6e6


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


def dbm_to_watts(dbm):
    return db_to_linear(dbm) * 1e-3


def watts_to_dbm(watts):
    return linear_to_db(np.asarray(watts, dtype=float) * 1e3)


@dataclass(frozen=True)
class PathlossModel:
    """``intercept + slope * log10(d / 1 m)`` dB, or a fixed ``intercept``."""

    kind: Literal["log-distance", "fixed"]
    intercept: float
    slope: float = 0.0

    def __post_init__(self):
        if self.kind not in ("log-distance", "fixed"):
            raise ValueError(f"unknown path loss kind {self.kind!r}")
        if not np.isfinite(self.intercept):
            raise ValueError("path loss intercept must be finite")
        if not (np.isfinite(self.slope) and self.slope >= 0):
            raise ValueError(f"path loss slope must be >= 0, got {self.slope}")
        if self.kind == "fixed" and self.slope != 0:
            raise ValueError("fixed path loss has no slope")

    @classmethod
    def log_distance(cls, intercept: float, slope: float) -> PathlossModel:
        return cls("log-distance", float(intercept), float(slope))

    @classmethod
    def fixed(cls, loss_db: float) -> PathlossModel:
        return cls("fixed", float(loss_db))


# Reference path-loss rows, d in meters.
TERRESTRIAL_LOS = PathlossModel.log_distance(35.0, 38.0)
TERRESTRIAL_NLOS = PathlossModel.log_distance(35.0, 40.0)
UAV_PATHLOSS = PathlossModel.log_distance(78.0, 20.0)
SATELLITE_PATHLOSS = PathlossModel.fixed(148.0)


def pathloss_db(model: PathlossModel, tx, rx):
    """Path loss in dB from ``tx`` to ``rx`` (a 3-vector or ``(n, 3)`` array).

    Log-distance losses clamp the distance to 1 m so co-located points stay finite.
    """
    rx = np.asarray(rx, dtype=float)
    if model.kind == "fixed":
        out = np.full(np.atleast_2d(rx).shape[0], model.intercept)
    else:
        d = np.linalg.norm(np.atleast_2d(rx) - np.asarray(tx, dtype=float), axis=-1)
        out = model.intercept + model.slope * np.log10(np.maximum(d, MIN_DISTANCE_M))
    return float(out[0]) if rx.ndim == 1 else out


@dataclass(frozen=True, eq=False)
class BaseStation:
    """One terrestrial, airborne or satellite transmitter.

    Powers are in watts, ``bandwidth`` in Hz, ``antenna_gain`` in dBi and
    ``capex_rate`` in currency per second (fixed cost, including any
    time-based operating fee).
    """

    kind: StationKind
    position: np.ndarray
    tx_power: float
    bandwidth: float
    circuit_power: float
    pathloss: PathlossModel
    idle_power: float = 0.0
    idle_prob: float = 0.0
    amp_efficiency: float = 1.0
    hover_power: float = 0.0
    antenna_gain: float = 0.0
    capex_rate: float = 0.0
    name: str = ""

    def __post_init__(self):
        if self.kind not in STATION_KINDS:
            raise ValueError(f"station kind must be one of {STATION_KINDS}, got {self.kind!r}")
        pos = np.array(self.position, dtype=float).reshape(3)
        pos.flags.writeable = False
        object.__setattr__(self, "position", pos)
        for attr in ("tx_power", "circuit_power", "idle_power", "hover_power", "capex_rate"):
            value = getattr(self, attr)
            if not (np.isfinite(value) and value >= 0):
                raise ValueError(f"{attr} must be a finite value >= 0, got {value}")
        if not self.bandwidth > 0:
            raise ValueError(f"bandwidth must be > 0, got {self.bandwidth}")
        if not 0.0 <= self.idle_prob <= 1.0:
            raise ValueError(f"idle_prob must lie in [0, 1], got {self.idle_prob}")
        if not self.amp_efficiency > 0:
            raise ValueError(f"amp_efficiency must be > 0, got {self.amp_efficiency}")
        if self.kind == "terrestrial" and self.hover_power != 0:
            raise ValueError("terrestrial stations cannot have hover power")

    def moved(self, position) -> BaseStation:
        return replace(self, position=np.asarray(position, dtype=float))

    def with_tx_power(self, watts: float) -> BaseStation:
        return replace(self, tx_power=float(watts))


@dataclass(frozen=True, eq=False)
class RISPanel:
    """Reconfigurable surface modeled as a Gaussian capacity increment.

    ``delta_rate`` is the aggregate extra rate (bit/s) the panel adds over the
    region; its spatial shape is ``N(position, footprint_cov)``. ``power`` is
    the panel's marginal power draw in watts.
    """

    position: np.ndarray
    footprint_cov: np.ndarray
    delta_rate: float
    power: float = 1.0
    capex_rate: float = 0.0
    name: str = ""

    def __post_init__(self):
        pos = np.array(self.position, dtype=float).reshape(3)
        pos.flags.writeable = False
        object.__setattr__(self, "position", pos)
        # validates SPD
        object.__setattr__(self, "footprint_cov", self.footprint.cov)
        for attr in ("delta_rate", "power", "capex_rate"):
            value = getattr(self, attr)
            if not (np.isfinite(value) and value >= 0):
                raise ValueError(f"RIS {attr} must be a finite value >= 0, got {value}")

    @property
    def footprint(self) -> Gaussian3:
        return Gaussian3(self.position, self.footprint_cov)

    @property
    def gmm(self) -> SpatialGMM:
        return SpatialGMM.single(self.footprint)

    def moved(self, position) -> RISPanel:
        return replace(self, position=np.asarray(position, dtype=float))


def received_power(station: BaseStation, loc) -> np.ndarray | float:
    """Received power in watts: ``P_t * G / L``."""
    loss_db = pathloss_db(station.pathloss, station.position, loc)
    return station.tx_power * db_to_linear(station.antenna_gain - loss_db)


def link_capacity(station: BaseStation, loc, noise_psd: float, interference=0.0):
    """Shannon rate ``B log2(1 + S / (I + B N0))`` in bit/s at ``loc``."""
    signal = received_power(station, loc)
    noise = station.bandwidth * noise_psd
    return station.bandwidth * np.log2(1.0 + signal / (interference + noise))


def station_power(station: BaseStation) -> float:
    """``P_m + Pr_i P_i + (1 - Pr_i)(lambda P_t + P_c)`` in watts."""
    s = station
    return s.hover_power + s.idle_prob * s.idle_power + (1.0 - s.idle_prob) * (
        s.amp_efficiency * s.tx_power + s.circuit_power
    )


@dataclass(frozen=True, eq=False)
class Scenario:
    """Everything needed to evaluate one epoch of a 3D network.

    ``traffic_total`` is in bits per epoch, ``noise_psd`` in W/Hz, ``epoch``
    in seconds, ``receiver_density`` in receivers per m^3 (it weights the
    point capacity of each cell) and ``opex_factor`` in currency per joule.
    """

    region: Box
    traffic_gmm: SpatialGMM
    traffic_total: float
    stations: tuple[BaseStation, ...] = ()
    ris: tuple[RISPanel, ...] = ()
    grid_resolution: int = 64
    noise_psd: float = float(dbm_to_watts(-174.0))
    interference_mode: InterferenceMode = "none"
    epoch: float = SECONDS_PER_HOUR
    receiver_density: float = 1e-3
    opex_factor: float = 0.1 / JOULES_PER_KWH
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "stations", tuple(self.stations))
        object.__setattr__(self, "ris", tuple(self.ris))
        if not isinstance(self.region, Box):
            raise ValueError("region must be a Box")
        if not isinstance(self.traffic_gmm, SpatialGMM):
            raise ValueError("traffic_gmm must be a SpatialGMM")
        if int(self.grid_resolution) != self.grid_resolution or self.grid_resolution < MIN_GRID_RESOLUTION:
            raise ValueError(
                f"grid_resolution must be an integer >= {MIN_GRID_RESOLUTION}, got {self.grid_resolution}"
            )
        checks = {
            "traffic_total": self.traffic_total > 0,
            "epoch": self.epoch > 0,
            "noise_psd": self.noise_psd > 0,
            "receiver_density": self.receiver_density > 0,
            "opex_factor": self.opex_factor >= 0,
        }
        for name, ok in checks.items():
            if not (ok and np.isfinite(getattr(self, name))):
                raise ValueError(f"{name} is out of range: {getattr(self, name)}")
        if self.interference_mode not in INTERFERENCE_MODES:
            raise ValueError(f"interference_mode must be one of {INTERFERENCE_MODES}")
        for s in self.stations:
            if not isinstance(s, BaseStation):
                raise ValueError(f"{s!r} is not a BaseStation")

    def replace(self, **changes) -> Scenario:
        return replace(self, **changes)


def total_power(scenario: Scenario) -> float:
    """Instantaneous network power in watts (stations plus RIS panels)."""
    return float(sum(station_power(s) for s in scenario.stations) + sum(r.power for r in scenario.ris))


def total_bandwidth(scenario: Scenario) -> float:
    return float(sum(s.bandwidth for s in scenario.stations))
