"""Scenario files: INI text with one section per station, RIS panel and traffic component.

Layout::

    [scenario]
    region_min = 0, 0, 0
    region_max = 1000, 1000, 1000
    traffic_total_bits = 1e18

    [traffic.1]
    weight = 1
    mean = 300, 700, 10
    cov = 1e4                 # scalar, 3 diagonal entries, or 9 entries

    [station.tbs]
    kind = terrestrial
    position = 500, 500, 35
    tx_power_dbm = 35
    pathloss = nlos

    [ris.panel]               # optional
    [asset.uav]               # sweep assets, not part of the scenario roster

See the README for every key. Unknown sections and keys are rejected.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .gmm import Gaussian3, SpatialGMM
from .radio import (
    INTERFERENCE_MODES,
    SATELLITE_PATHLOSS,
    SECONDS_PER_HOUR,
    SECONDS_PER_YEAR,
    JOULES_PER_KWH,
    STATION_KINDS,
    TERRESTRIAL_LOS,
    TERRESTRIAL_NLOS,
    UAV_PATHLOSS,
    BaseStation,
    PathlossModel,
    RISPanel,
    Scenario,
    dbm_to_watts,
)
from .region import Box

PRESET_PACKAGE = "iree.presets"

NAMED_PATHLOSS = {
    "los": TERRESTRIAL_LOS,
    "nlos": TERRESTRIAL_NLOS,
    "uav": UAV_PATHLOSS,
    "satellite": SATELLITE_PATHLOSS,
}

SCENARIO_KEYS = {
    "name", "region_min", "region_max", "edge_m", "grid", "noise_psd_dbm_hz",
    "noise_psd_w_hz", "interference", "epoch_s", "traffic_total_bits",
    "receiver_density_per_m3", "opex_per_kwh",
}
TRAFFIC_KEYS = {"weight", "mean", "cov"}
STATION_KEYS = {
    "kind", "position", "tx_power_dbm", "tx_power_w", "bandwidth_hz",
    "circuit_power_w", "circuit_power_mw", "idle_power_w", "idle_power_mw",
    "idle_prob", "amp_efficiency", "hover_power_w", "antenna_gain_dbi",
    "pathloss", "capex_per_year", "capex_per_hour", "opex_per_hour",
}
RIS_KEYS = {"kind", "position", "footprint_cov", "delta_rate_bps", "power_w", "capex_per_year", "capex_per_hour"}

STATION_DEFAULTS = {
    "bandwidth_hz": 20e6,
    "tx_power_dbm": 35.0,
}


@dataclass(frozen=True)
class LoadedConfig:
    scenario: Scenario
    assets: dict[str, BaseStation | RISPanel]


def _floats(text: str, where: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"{where}: expected numbers, got {text!r}") from None


def _float(section, key, where) -> float:
    vals = _floats(section[key], f"{where}.{key}")
    if len(vals) != 1:
        raise ConfigError(f"{where}.{key}: expected one number, got {section[key]!r}")
    return vals[0]


def _vector(section, key, where) -> np.ndarray:
    vals = _floats(section[key], f"{where}.{key}")
    if len(vals) != 3:
        raise ConfigError(f"{where}.{key}: expected 3 numbers, got {len(vals)}")
    return np.array(vals)


def _covariance(section, key, where) -> np.ndarray:
    vals = _floats(section[key], f"{where}.{key}")
    if len(vals) == 1:
        return vals[0] * np.eye(3)
    if len(vals) == 3:
        return np.diag(vals)
    if len(vals) == 9:
        return np.array(vals).reshape(3, 3)
    raise ConfigError(f"{where}.{key}: covariance needs 1, 3 or 9 numbers, got {len(vals)}")


def _power(section, stem, where, default=None) -> float:
    keys = [k for k in (f"{stem}_w", f"{stem}_mw", f"{stem}_dbm") if k in section]
    if len(keys) > 1:
        raise ConfigError(f"{where}: give only one of {', '.join(keys)}")
    if not keys:
        if default is None:
            raise ConfigError(f"{where}: missing {stem}_w")
        return default
    key = keys[0]
    value = _float(section, key, where)
    if key.endswith("_mw"):
        return value * 1e-3
    if key.endswith("_dbm"):
        return float(dbm_to_watts(value))
    return value


def _capex_rate(section, where) -> float:
    """Fixed cost per second from yearly/hourly CapEx and hourly OpEx fees."""
    rate = 0.0
    if "capex_per_year" in section:
        rate += _float(section, "capex_per_year", where) / SECONDS_PER_YEAR
    if "capex_per_hour" in section:
        rate += _float(section, "capex_per_hour", where) / SECONDS_PER_HOUR
    if "opex_per_hour" in section:
        rate += _float(section, "opex_per_hour", where) / SECONDS_PER_HOUR
    return rate


def _pathloss(text: str, where: str) -> PathlossModel:
    key = text.strip().lower()
    if key in NAMED_PATHLOSS:
        return NAMED_PATHLOSS[key]
    kind, _, params = key.partition(":")
    vals = _floats(params, where)
    if kind == "log-distance" and len(vals) == 2:
        return PathlossModel.log_distance(*vals)
    if kind == "fixed" and len(vals) == 1:
        return PathlossModel.fixed(vals[0])
    raise ConfigError(
        f"{where}: pathloss must be one of {sorted(NAMED_PATHLOSS)}, "
        f"'log-distance:A,B' or 'fixed:A', got {text!r}"
    )


def _check_keys(section, allowed, where):
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")


def _station(section, where, name) -> BaseStation:
    _check_keys(section, STATION_KEYS, where)
    if "position" not in section:
        raise ConfigError(f"{where}: missing position")
    kind = section.get("kind", "terrestrial").strip()
    if kind not in STATION_KINDS:
        raise ConfigError(f"{where}.kind: must be one of {STATION_KINDS}, got {kind!r}")
    default_loss = {"terrestrial": "los", "airborne": "uav", "satellite": "satellite"}[kind]
    tx_section = dict(section)
    if not any(k.startswith("tx_power") for k in tx_section):
        tx_section["tx_power_dbm"] = str(STATION_DEFAULTS["tx_power_dbm"])
    try:
        return BaseStation(
            kind=kind,
            position=_vector(section, "position", where),
            tx_power=_power(tx_section, "tx_power", where),
            bandwidth=_float(section, "bandwidth_hz", where) if "bandwidth_hz" in section else STATION_DEFAULTS["bandwidth_hz"],
            circuit_power=_power(section, "circuit_power", where, default=0.0),
            idle_power=_power(section, "idle_power", where, default=0.0),
            idle_prob=_float(section, "idle_prob", where) if "idle_prob" in section else 0.0,
            amp_efficiency=_float(section, "amp_efficiency", where) if "amp_efficiency" in section else 1.0,
            hover_power=_power(section, "hover_power", where, default=0.0),
            antenna_gain=_float(section, "antenna_gain_dbi", where) if "antenna_gain_dbi" in section else 0.0,
            pathloss=_pathloss(section.get("pathloss", default_loss), f"{where}.pathloss"),
            capex_rate=_capex_rate(section, where),
            name=name,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _ris(section, where, name) -> RISPanel:
    _check_keys(section, RIS_KEYS, where)
    for key in ("position", "footprint_cov", "delta_rate_bps"):
        if key not in section:
            raise ConfigError(f"{where}: missing {key}")
    try:
        return RISPanel(
            position=_vector(section, "position", where),
            footprint_cov=_covariance(section, "footprint_cov", where),
            delta_rate=_float(section, "delta_rate_bps", where),
            power=_power(section, "power", where, default=1.0),
            capex_rate=_capex_rate(section, where),
            name=name,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _parse(text: str, source: str) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(
        inline_comment_prefixes=("#", ";"), interpolation=None, default_section="__defaults__"
    )
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: parse error: {' '.join(str(exc).split())}") from None
    return parser


def parse_config(text: str, source: str = "<string>") -> LoadedConfig:
    parser = _parse(text, source)
    if "scenario" not in parser:
        raise ConfigError(f"{source}: missing [scenario] section")
    top = parser["scenario"]
    _check_keys(top, SCENARIO_KEYS, f"{source}: [scenario]")

    components, stations, ris, assets = [], [], [], {}
    for name in parser.sections():
        if name == "scenario":
            continue
        prefix, _, label = name.partition(".")
        where = f"{source}: [{name}]"
        sec = parser[name]
        if prefix == "traffic":
            _check_keys(sec, TRAFFIC_KEYS, where)
            for key in ("mean", "cov"):
                if key not in sec:
                    raise ConfigError(f"{where}: missing {key}")
            weight = _float(sec, "weight", where) if "weight" in sec else 1.0
            try:
                components.append((weight, Gaussian3(_vector(sec, "mean", where), _covariance(sec, "cov", where))))
            except ValueError as exc:
                raise ConfigError(f"{where}: traffic_gmm: {exc}") from None
        elif prefix == "station":
            stations.append(_station(sec, where, label))
        elif prefix == "ris":
            ris.append(_ris(sec, where, label))
        elif prefix == "asset":
            if sec.get("kind", "").strip() == "ris":
                assets[label] = _ris(sec, where, label)
            else:
                assets[label] = _station(sec, where, label)
        else:
            raise ConfigError(f"{where}: unknown section type {prefix!r}")
    if not components:
        raise ConfigError(f"{source}: traffic_gmm: at least one [traffic.N] section is required")

    where = f"{source}: [scenario]"
    try:
        traffic = SpatialGMM(tuple(components))
    except ValueError as exc:
        raise ConfigError(f"{source}: traffic_gmm: {exc}") from None
    try:
        if "edge_m" in top:
            region = Box.cube(_float(top, "edge_m", where))
        else:
            region = Box(_vector(top, "region_min", where), _vector(top, "region_max", where))
    except KeyError as exc:
        raise ConfigError(f"{where}: missing {exc.args[0]} (or edge_m)") from None
    except ValueError as exc:
        raise ConfigError(f"{where}: region: {exc}") from None
    if "traffic_total_bits" not in top:
        raise ConfigError(f"{where}: missing traffic_total_bits")
    if "noise_psd_w_hz" in top:
        noise = _float(top, "noise_psd_w_hz", where)
    else:
        noise = float(dbm_to_watts(_float(top, "noise_psd_dbm_hz", where))) if "noise_psd_dbm_hz" in top else float(dbm_to_watts(-174.0))
    interference = top.get("interference", "none").strip()
    if interference not in INTERFERENCE_MODES:
        raise ConfigError(f"{where}.interference: must be one of {INTERFERENCE_MODES}")
    grid = _float(top, "grid", where) if "grid" in top else 64
    fields = dict(
        region=region,
        traffic_gmm=traffic,
        traffic_total=_float(top, "traffic_total_bits", where),
        stations=tuple(stations),
        ris=tuple(ris),
        grid_resolution=int(grid) if grid == int(grid) else grid,
        noise_psd=noise,
        interference_mode=interference,
        epoch=_float(top, "epoch_s", where) if "epoch_s" in top else SECONDS_PER_HOUR,
        receiver_density=_float(top, "receiver_density_per_m3", where) if "receiver_density_per_m3" in top else 1e-3,
        opex_factor=(_float(top, "opex_per_kwh", where) if "opex_per_kwh" in top else 0.1) / JOULES_PER_KWH,
        name=top.get("name", Path(source).stem).strip(),
    )
    try:
        scenario = Scenario(**fields)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    return LoadedConfig(scenario, assets)


def list_presets() -> list[str]:
    files = resources.files(PRESET_PACKAGE).iterdir()
    return sorted(f.name[:-4] for f in files if f.name.endswith(".ini"))


def _read_source(path_or_preset: str | Path) -> tuple[str, str]:
    path = Path(path_or_preset)
    if path.suffix == ".ini" or path.exists():
        try:
            return path.read_text(encoding="utf-8"), str(path)
        except OSError as exc:
            raise ConfigError(f"{path}: {exc.strerror}") from None
    name = str(path_or_preset)
    if name not in list_presets():
        raise ConfigError(f"no such file or preset {name!r}; presets: {', '.join(list_presets())}")
    text = resources.files(PRESET_PACKAGE).joinpath(f"{name}.ini").read_text(encoding="utf-8")
    return text, name


def load_config(path_or_preset: str | Path) -> LoadedConfig:
    text, source = _read_source(path_or_preset)
    return parse_config(text, source)


def load_scenario(path_or_preset: str | Path) -> Scenario:
    """Load and validate a scenario from a file path or a bundled preset name."""
    return load_config(path_or_preset).scenario
