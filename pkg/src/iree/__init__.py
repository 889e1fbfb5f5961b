"""Integrated relative energy efficiency (IREE) for 3D wireless networks.

Capacity and traffic are gridded over a 3D region, and the IREE scores a deployment by
how well the spatial shape of capacity matches the spatial shape of demand,
not just by bits per joule.
"""

from .config import list_presets, load_config, load_scenario
from .divergence import DivergenceResult, js_closed_form, js_jensen_upper, js_numeric, js_ris_mixture
from .errors import IREEError
from .field import GridField, build_capacity_field, build_traffic_field
from .gmm import Gaussian3, SpatialGMM, exp_mutual_divergence, fit_gmm_moment_match, pdf
from .metrics import (
    CostModel,
    MetricsReport,
    Snapshot,
    aee,
    build_snapshot,
    de,
    de_iree,
    ee,
    evaluate,
    iee_numeric,
    iree,
    iree_value,
    ris_iree,
    sagin_iree_bound,
    se,
    se_iree,
    smoothed_utility,
)
from .radio import BaseStation, PathlossModel, RISPanel, Scenario, link_capacity, station_power
from .region import Box, Grid
from .report import emit_report, read_csv
from .sweep import SweepSpec, run_sweep

__version__ = "0.1.0"
