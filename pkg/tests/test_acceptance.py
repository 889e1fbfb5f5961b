"""Acceptance gate: one test and one PASS/FAIL line per criterion.

Run ``pytest tests/test_acceptance.py -v``; the criterion lines are printed in
the terminal summary (or run this file directly with ``python``).
"""

import math
from dataclasses import replace
import time

import numpy as np
import pytest
from scipy.stats import spearmanr

from conftest import ACCEPTANCE_LINES
from iree.config import load_config, load_scenario
from iree.divergence import js_closed_form, js_numeric
from iree.field import GridField, bounding_grid, density_on_grid, normalize_field
from iree.gmm import Gaussian3, SpatialGMM
from iree.metrics import (
    Snapshot,
    aee,
    build_snapshot,
    cost_model,
    de,
    de_iree,
    ee,
    iree,
    iree_value,
    sagin_iree_bound,
    se,
    se_iree,
    smoothed_utility,
)
from iree.radio import dbm_to_watts, link_capacity
from iree.randomized import random_covariance, random_scenario, random_station
from iree.region import Grid
from iree.sweep import SweepSpec, direction_changes, run_sweep

SEED = 1729


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def random_pair(rng, separation):
    """Two 1-3 component mixtures with unit-scale covariances, centers ``separation`` sigma apart."""
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)

    def mixture(center):
        k = int(rng.integers(1, 4))
        comps = []
        for w in rng.dirichlet(np.ones(k)):
            cov = random_covariance(rng, 1.0, anisotropic=bool(rng.integers(2)))
            comps.append((w, Gaussian3(center + rng.normal(scale=0.5, size=3), cov)))
        return SpatialGMM(tuple(comps))

    return mixture(np.zeros(3)), mixture(separation * direction)


def oracle_js(c, d, resolution=64):
    grid = bounding_grid([c, d], resolution)
    return js_numeric(density_on_grid(c, grid), density_on_grid(d, grid)).value


# 1

def test_criterion_1_divergence_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    gaps, worst = [], None
    for i in range(200):
        c, d = random_pair(rng, rng.uniform(0.0, 6.0))
        gap = abs(js_closed_form(c, d).value - oracle_js(c, d))
        gaps.append(gap)
        if worst is None or gap > worst[0]:
            worst = (gap, i)
    gaps = np.array(gaps)

    unit = SpatialGMM.single(Gaussian3.isotropic(np.zeros(3), 1.0))
    c, _ = random_pair(rng, 0.0)
    far = SpatialGMM.single(Gaussian3.isotropic(np.array([20.0, 0, 0]), 1.0))
    extremes = {
        "identical closed": js_closed_form(c, c).value,
        "identical numeric": oracle_js(c, c),
        "20 sigma closed": js_closed_form(unit, far).value,
        "20 sigma numeric": oracle_js(unit, far),
    }
    exact_ok = (
        extremes["identical closed"] <= 1e-9
        and extremes["identical numeric"] <= 1e-9
        and extremes["20 sigma closed"] >= 0.999
        and extremes["20 sigma numeric"] >= 0.999
    )
    runtime = time.perf_counter() - t0
    within = float(np.mean(gaps <= 0.05))
    ok = bool(gaps.max() <= 0.05) and exact_ok and runtime < 60
    detail = (
        f"max |closed - numeric| = {gaps.max():.3f} (tol 0.05, pair {worst[1]}), "
        f"{100 * within:.0f}% of 200 pairs within tol, median gap {np.median(gaps):.3f}; "
        f"extremes {'ok' if exact_ok else 'FAILED'} "
        f"({', '.join(f'{k} {v:.6f}' for k, v in extremes.items())}); {runtime:.1f} s"
    )
    assert record(1, "closed-form JS vs grid oracle", ok, detail), detail


# 2

def test_criterion_2_traffic_invariance_of_ee():
    t0 = time.perf_counter()
    base = load_scenario("table1-terrestrial")
    gmm = base.traffic_gmm
    variants = []
    for sigma2 in (2.5e3, 1e4, 4e4, 1.6e5):
        for offset in ((0, 0, 0), (150, -150, 0), (200, -200, 200)):
            variants.append(base.replace(traffic_gmm=gmm.with_covariance(sigma2 * np.eye(3)).translated(offset)))
    snaps = [build_snapshot(sc) for sc in variants]
    ees = np.array([ee(s) for s in snaps])
    irees = np.array([iree(s) for s in snaps])
    ee_var = float(np.ptp(ees) / np.max(ees))
    iree_var = float(np.ptp(irees) / np.max(irees))

    # region rescaled with stations and totals held fixed
    ref = snaps[0]
    ratios = []
    for k in (0.5, 2.0, 3.0):
        grid = Grid(ref.scenario.region.scaled(k), ref.capacity.grid.dims)
        moved = ref.scenario.replace(region=grid.region)
        cap = GridField(grid, ref.capacity.values)
        scaled = Snapshot(moved, cap, (cap,), GridField(grid, ref.traffic.values))
        ratios.append(abs(aee(scaled) * k**3 / aee(ref) - 1.0))
    runtime = time.perf_counter() - t0
    ok = ee_var < 1e-9 and max(ratios) < 1e-9 and iree_var > 0.10 and runtime < 30
    detail = (
        f"EE relative variation {ee_var:.1e} (< 1e-9), AEE*k^3 deviation {max(ratios):.1e} (< 1e-9), "
        f"IREE relative variation {100 * iree_var:.1f}% (> 10%) over {len(snaps)} traffic variants; {runtime:.1f} s"
    )
    assert record(2, "EE ignores traffic, AEE ~ 1/V, IREE does not", ok, detail), detail


# 3

def test_criterion_3_bell_shape():
    t0 = time.perf_counter()
    base = load_scenario("table1-terrestrial")
    spec = SweepSpec("se-sweep", 0.0, 50.0, 26)
    curves, changes = {}, {}
    for sigma2 in (2.5e3, 1e4, 4e4):
        sc = base.replace(traffic_gmm=base.traffic_gmm.with_covariance(sigma2 * np.eye(3)))
        rows = run_sweep(sc, spec, ("numeric",))
        curves[sigma2] = np.array([r.numeric.iree for r in rows])
        changes[sigma2] = direction_changes(curves[sigma2])
    best_sigma = max(curves, key=lambda s: curves[s].max())
    peak_dbm = spec.values()[int(np.argmax(curves[best_sigma]))]
    at_peak = {}
    for sigma2 in curves:
        sc = base.replace(traffic_gmm=base.traffic_gmm.with_covariance(sigma2 * np.eye(3)))
        at_peak[sigma2] = build_snapshot(spec_point(sc, peak_dbm)).xi_numeric.value
    closest = min(at_peak, key=at_peak.get)
    runtime = time.perf_counter() - t0
    ok = all(v == 1 for v in changes.values()) and closest == best_sigma and runtime < 60
    detail = (
        f"direction changes per sigma_d {dict((f'{k:g}', v) for k, v in changes.items())} (each must be 1); "
        f"global max at sigma_d={best_sigma:g}, {peak_dbm:g} dBm; xi_numeric there "
        f"{dict((f'{k:g}', round(v, 4)) for k, v in at_peak.items())}, min at {closest:g}; {runtime:.1f} s"
    )
    assert record(3, "SE-IREE bell shape", ok, detail), detail


def spec_point(scenario, dbm):
    watts = float(dbm_to_watts(dbm))
    return scenario.replace(stations=tuple(s.with_tx_power(watts) for s in scenario.stations))


# 4

def test_criterion_4_trade_off_identities():
    worst = 0.0
    for seed in range(50):
        snap = build_snapshot(random_scenario(SEED + seed, grid=16))
        cost = cost_model(snap.scenario)
        xi = snap.xi_numeric.value
        direct = iree(snap)
        via_se = se_iree(se(snap), snap.b_tot, snap.d_tot, snap.p_tot, xi, snap.scenario.epoch)
        via_de = de_iree(de(snap, cost), cost.capex_total, cost.opex_factor, snap.d_tot, snap.p_tot, xi)
        worst = max(worst, abs(via_se / direct - 1), abs(via_de / direct - 1))
    ok = worst <= 1e-9
    detail = f"max relative deviation of SE and DE forms from IREE over 50 scenarios {worst:.1e} (<= 1e-9)"
    assert record(4, "trade-off identities", ok, detail), detail


# 5

def test_criterion_5_smoothed_chain():
    worst_slack, worst_eq = math.inf, 0.0
    for seed in range(50):
        sc = random_scenario(SEED + 100 + seed, grid=16)
        snap = build_snapshot(sc)
        chain = min(snap.c_tot, snap.d_tot) * (1 - snap.xi_numeric.value)
        worst_slack = min(worst_slack, (smoothed_utility(snap) - chain) / snap.c_tot)
        balanced = build_snapshot(sc.replace(traffic_total=snap.c_tot))
        chain_eq = min(balanced.c_tot, balanced.d_tot) * (1 - balanced.xi_numeric.value)
        worst_eq = max(worst_eq, abs(smoothed_utility(balanced) / chain_eq - 1))
    ok = worst_slack >= -1e-6 and worst_eq <= 1e-6
    detail = (
        f"min (smoothed - chain)/C_Tot = {worst_slack:.2e} (>= -1e-6); "
        f"max relative gap at C_Tot = D_Tot {worst_eq:.1e} (<= 1e-6), 50 scenarios"
    )
    assert record(5, "smoothed-utility chain", ok, detail), detail


# 6

def terrestrial_only(sc):
    return sc.replace(stations=tuple(s for s in sc.stations if s.kind == "terrestrial"))


def pooled_check(base, overlay):
    t = build_snapshot(base)
    pooled = build_snapshot(base.replace(stations=base.stations + overlay))
    over_field = pooled.capacity.values - t.capacity.values
    over = GridField(t.capacity.grid, np.clip(over_field, 0, None))
    xi_t = t.xi_numeric.value
    xi_o = js_numeric(normalize_field(over), t.traffic_density).value
    p_overlay = pooled.p_tot - t.p_tot
    bound = sagin_iree_bound(xi_t, t.c_tot, t.p_tot, xi_o, over.total(), p_overlay, t.d_tot)
    return bound, iree(pooled), min(pooled.c_tot, pooled.d_tot) / pooled.p_tot, (xi_t, xi_o)


def test_criterion_6_sagin_bound():
    rng = np.random.default_rng(SEED + 6)
    worst, worst_eq = -math.inf, 0.0
    for i in range(30):
        sc = random_scenario(SEED + 200 + i, grid=16)
        base = terrestrial_only(sc)
        if not base.stations:
            base = base.replace(stations=(random_station(rng, sc.region, "terrestrial"),))
        overlay = tuple(random_station(rng, sc.region, str(rng.choice(["airborne", "satellite"])))
                        for _ in range(int(rng.integers(1, 3))))
        bound, pooled, scale, _ = pooled_check(base, overlay)
        worst = max(worst, (bound - pooled) / scale)
        # an overlay with the terrestrial field's exact shape makes both divergences equal
        twin = tuple(replace(s, kind="airborne", name="twin") for s in base.stations)
        bound, pooled, _, (xi_t, xi_o) = pooled_check(base, twin)
        assert abs(xi_t - xi_o) < 1e-12
        worst_eq = max(worst_eq, abs(bound / pooled - 1))
    ok = worst <= 0.02 and worst_eq <= 1e-6
    detail = (
        f"max (bound - pooled IREE)/(min(C,D)/P) = {worst:.3e} (<= 0.02) over 30 scenarios; "
        f"equal-divergence relative gap {worst_eq:.1e} (<= 1e-6)"
    )
    assert record(6, "SAGIN lower bound", ok, detail), detail


# 7

SWEEPS = {
    "RIS": ("ris",),
    "UAV": ("uav",),
    "UAV+sat": ("uav", "satellite"),
}


def deployment(preset):
    loaded = load_config(preset)
    base = iree(build_snapshot(loaded.scenario))
    out = {}
    for label, names in SWEEPS.items():
        spec = SweepSpec("placement-sweep", 0.0, 1000.0, 21, "x", tuple(loaded.assets[n] for n in names))
        rows = run_sweep(loaded.scenario, spec, ("numeric",))
        irees = np.array([r.numeric.iree for r in rows])
        match = np.array([1 - r.numeric.xi for r in rows])
        out[label] = (irees.max() / base, float(spearmanr(match, irees).statistic), spec.values()[np.argmax(irees)])
    return out


def test_criterion_7_deployment_experiments():
    t0 = time.perf_counter()
    t1, t2 = deployment("sec6-type1"), deployment("sec6-type2")
    part_a = t1["RIS"][0] > t1["UAV"][0] and t1["RIS"][0] > 1.2 and t1["UAV"][0] > 1.2
    part_b = t2["UAV+sat"][0] >= t2["UAV"][0] >= t2["RIS"][0] > 1.2
    corr = {f"{p}/{k}": v[1] for p, res in (("type1", t1), ("type2", t2)) for k, v in res.items()}
    part_c = all(v > 0.9 for v in corr.values())
    runtime = time.perf_counter() - t0
    ok = part_a and part_b and part_c and runtime < 300

    def gains(res):
        return ", ".join(f"{k} {v[0]:.2f}x at x={v[2]:g}" for k, v in res.items())

    detail = (
        f"(a) {'ok' if part_a else 'FAILED'} type-1 best/baseline: {gains(t1)}; "
        f"(b) {'ok' if part_b else 'FAILED'} type-2: {gains(t2)}; "
        f"(c) {'ok' if part_c else 'FAILED'} Spearman(1-xi, IREE) "
        f"{', '.join(f'{k} {v:.2f}' for k, v in corr.items())} (each > 0.9); {runtime:.0f} s"
    )
    assert record(7, "deployment placement sweeps", ok, detail), detail


# 8

def test_criterion_8_link_budget():
    # independent hand budget: 35 dBm - (35 + 38 log10 100) dB vs -174 dBm/Hz over 20 MHz
    rx_dbm = 35.0 - (35.0 + 38.0 * 2.0)
    noise_dbm = -174.0 + 10.0 * math.log10(20e6)
    hand = 20e6 * math.log2(1.0 + 10.0 ** ((rx_dbm - noise_dbm) / 10.0))
    (bs,) = load_scenario("table1-terrestrial").stations
    rx = bs.position + np.array([100.0, 0.0, 0.0])
    got = float(link_capacity(bs, rx, float(dbm_to_watts(-174.0))))
    ok = abs(got / 1.661e8 - 1) <= 0.01 and abs(hand / 1.661e8 - 1) <= 0.01 and abs(got / hand - 1) < 1e-12
    detail = f"link_capacity {got:.5e} bps, hand budget {hand:.5e} bps, target 1.661e8 +/- 1%"
    assert record(8, "LoS link budget at 100 m", ok, detail), detail


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
