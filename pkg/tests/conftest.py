import numpy as np
import pytest

from iree.gmm import Gaussian3, SpatialGMM
from iree.radio import TERRESTRIAL_LOS, BaseStation, Scenario, dbm_to_watts
from iree.region import Box


def terrestrial(position=(500.0, 500.0, 35.0), dbm=35.0, **kw):
    return BaseStation(
        kind="terrestrial",
        position=np.asarray(position, dtype=float),
        tx_power=float(dbm_to_watts(dbm)),
        bandwidth=kw.pop("bandwidth", 20e6),
        circuit_power=kw.pop("circuit_power", 1.0),
        pathloss=kw.pop("pathloss", TERRESTRIAL_LOS),
        **kw,
    )


def hotspot(mean=(300.0, 700.0, 10.0), variance=1e4):
    return SpatialGMM.single(Gaussian3.isotropic(mean, variance))


def small_scenario(grid=16, edge=1000.0, traffic=None, stations=None, **kw):
    return Scenario(
        region=Box.cube(edge),
        traffic_gmm=traffic or hotspot(),
        traffic_total=kw.pop("traffic_total", 1e18),
        stations=tuple(stations) if stations is not None else (terrestrial(),),
        grid_resolution=grid,
        **kw,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one PASS/FAIL line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
