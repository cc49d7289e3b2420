"""Acceptance criteria 1-12, each reported as one PASS/FAIL line.

Random points are drawn from the SplitMix64 stream so every run samples the
same parameters.
"""

import math
import os
import subprocess
import sys
import time

import numpy as np

from qclone import singleclone
from qclone.broadcast import (
    Scenario,
    broadcast_output,
    compact_form_check,
    diluted_input,
    global_depolarize_oracle,
    l_from_m,
    local_uc_oracle,
    scenario_constants,
)
from qclone.rng import SplitMix64
from qclone.separability import critical_gamma, critical_gamma_numeric, cross_validate
from qclone.sweep import Axis, phase_diagram, region_fraction

S = 1 / math.sqrt(2)
PI = math.pi

# Entangled fractions of the 200x200 raster, frozen from the first build.
GOLDEN_FRACTIONS = {"local-uc": 0.815775, "global-uc": 0.915275, "ent-cloner": 0.92245}


def grid4():
    theta = np.linspace(0, PI, 20)
    eps = np.linspace(0, 0.95, 20)
    eta = np.concatenate([np.linspace(0, 10, 19), [math.inf]])
    phi = np.linspace(0, 2 * PI, 20, endpoint=False)
    return [m.ravel() for m in np.meshgrid(theta, eps, eta, phi, indexing="ij")]


def test_01_ideal_uc_fidelity(criterion):
    rng = SplitMix64(1)
    th, ph, et = rng.uniform(0, PI, 1000), rng.uniform(0, 2 * PI, 1000), rng.uniform(0, 20, 1000)
    t0 = time.perf_counter()
    fc = singleclone.fidelity_closed_form("uc", th, 0.0, et)
    fn = singleclone.fidelity_numeric("uc", th, ph, 0.0, et)
    dt = time.perf_counter() - t0
    err = max(np.max(np.abs(fc - 5 / 6)), np.max(np.abs(fn - 5 / 6)))
    criterion(1, "ideal UC fidelity 5/6", err <= 1e-12 and dt < 1.0,
              f"max |F - 5/6| = {err:.2e} over 1000 points, {dt:.2f} s")


def test_02_closed_form_equals_numeric(criterion):
    th, ep, et, ph = grid4()
    t0 = time.perf_counter()
    err = 0.0
    for m in singleclone.Machine:
        fc = singleclone.fidelity_closed_form(m, th, ep, et)
        fn = singleclone.fidelity_numeric(m, th, ph, ep, et)
        err = max(err, float(np.max(np.abs(fc - fn))))
    dt = time.perf_counter() - t0
    criterion(2, "closed form vs matrix pipeline", err <= 1e-12 and dt < 10.0,
              f"max diff {err:.2e} on 2 x 20^4 points, {dt:.2f} s")


def test_03_equatorial_temperature_invariance(criterion):
    eps = np.linspace(0, 0.99, 100)
    spread = 0.0
    for m in singleclone.Machine:
        f = np.array([singleclone.fidelity_numeric(m, PI / 2, 0.0, eps, eta)
                      for eta in [0.0, 1.0, 10.0, math.inf]])
        spread = max(spread, float(np.max(f.max(axis=0) - f.min(axis=0))))
    criterion(3, "equator insensitive to temperature", spread <= 1e-12,
              f"max spread over eta {{0,1,10,inf}} = {spread:.2e}")


def test_04_classical_threshold(criterion):
    # The threshold is derived from the UC fidelity; the PCC count is informational.
    th, ep, et, _ = grid4()
    pred = ep < singleclone.classical_threshold(th, et)
    counts = {}
    for m in singleclone.Machine:
        f = singleclone.fidelity_closed_form(m, th, ep, et)
        keep = np.abs(f - 0.5) >= 1e-9
        counts[m.value] = (int(np.sum((pred != singleclone.beats_classical(f))[keep])), int(keep.sum()))
    bad, compared = counts["uc"]
    criterion(4, "classical threshold predicate (UC)", bad == 0 and compared > 0,
              f"UC {bad} mismatches over {compared} points; "
              f"PCC differs from the UC threshold at {counts['pcc'][0]} points")


def test_05_pcc_slopes_and_uc_advantage(criterion):
    h, eta = 1e-5, 1e3

    def slope(theta):
        f = singleclone.fidelity_closed_form
        return float((f("pcc", theta, 0.5 + h, eta) - f("pcc", theta, 0.5 - h, eta)) / (2 * h))

    s1, s28 = slope(1.0), slope(2.8)
    th = np.linspace(0, 0.5, 11)[:, None]
    ep = np.linspace(0.8, 0.99, 20)[None, :]
    gap = (singleclone.fidelity_closed_form("uc", th, ep, eta)
           - singleclone.fidelity_closed_form("pcc", th, ep, eta))
    wins = int(np.sum(gap > 0))
    criterion(5, "PCC slopes and UC advantage", s1 < 0 < s28 and wins > 0,
              f"dF/deps = {s1:.4f} at theta=1, {s28:.4f} at theta=2.8; UC > PCC at {wins} points")


def test_06_scenario_constants(criterion):
    ki, kii, kiii = (scenario_constants(s) for s in Scenario)
    a, c = kiii.A, kiii.C
    m_iii = 6 * a * a + 4 * a * c
    checks = [
        ki.M == 4 / 9,
        kii.M == 3 / 5,
        abs(m_iii - (2 + math.sqrt(13)) / 9) <= 1e-14,
        abs(kiii.M - m_iii) <= 1e-14,
        abs(l_from_m(ki.M) - 1 / 3) <= 1e-14,
        abs(l_from_m(kii.M) - 3 / 10) <= 1e-14,
        abs(l_from_m(kiii.M) - kiii.L) <= 1e-14,
    ]
    criterion(6, "scenario constants", all(checks),
              f"M_iii = {kiii.M:.16f}, L = ({ki.L:.15f}, {kii.L:.15f}, {kiii.L:.15f})")


def test_07_channel_oracles(criterion):
    rng = SplitMix64(7)
    n = 10_000
    a, e, g = rng.uniform(-1, 1, n), rng.uniform(0, 1, n), rng.uniform(0, 10, n)
    t0 = time.perf_counter()
    rho = diluted_input(a, e, g)
    err_i = float(np.max(np.abs(local_uc_oracle(rho) - broadcast_output(a, e, g, "local-uc"))))
    err_ii = float(np.max(np.abs(global_depolarize_oracle(rho, 3 / 5)
                                 - broadcast_output(a, e, g, "global-uc"))))
    dt = time.perf_counter() - t0
    criterion(7, "channel oracles", max(err_i, err_ii) <= 1e-12 and dt < 10.0,
              f"local {err_i:.2e}, global {err_ii:.2e} on {n} points, {dt:.2f} s")


def test_08_compact_form(criterion):
    rng = SplitMix64(8)
    n = 2000
    a, e, g = rng.uniform(-1, 1, n), rng.uniform(0, 1, n), rng.uniform(0, 10, n)
    pts = list(zip(a.tolist(), e.tolist(), g.tolist()))

    ii = all(compact_form_check(x, y, z, "global-uc")[0] for x, y, z in pts)
    on_set = [(x, 1.0, z) for x, _, z in pts[:500]]
    on_set += [(math.copysign(S, x), y, z) for x, y, z in pts[500:1000]]
    iii_on = all(compact_form_check(x, y, z, "ent-cloner")[0] for x, y, z in on_set)
    # away from the set the residual |L - M/2| (1 - eps) |2 alpha^2 - 1| is well above 1e-10
    off = [p for p in pts if (1 - p[1]) * abs(2 * p[0] ** 2 - 1) > 1e-6]
    iii_off = not any(compact_form_check(x, y, z, "ent-cloner")[0] for x, y, z in off)
    i_holds = sum(compact_form_check(x, y, z, "local-uc")[0] for x, y, z in pts)
    criterion(8, "compact Werner form", ii and iii_on and iii_off,
              f"(ii) all {n} hold; (iii) holds on the set and fails at {len(off)} off-set points; "
              f"(i) holds at {i_holds}/{n}")


def test_09_tables_vs_ppt(criterion):
    rng = SplitMix64(9)
    n = 10_000
    t0 = time.perf_counter()
    reports = []
    for s in Scenario:
        for table in ["table1", "inf", "zero"]:
            a, e, g = rng.uniform(-1, 1, n), rng.uniform(0, 1, n), rng.uniform(0, 10, n)
            reports.append(cross_validate(s, a, e, g if table == "table1" else None, table=table))
    dt = time.perf_counter() - t0
    bad = sum(r.mismatches for r in reports)
    compared = min(r.samples for r in reports)
    criterion(9, "tables vs numeric PPT", bad == 0 and dt < 60.0,
              f"{bad} mismatches over 9 x {n} samples (min {compared} compared), {dt:.1f} s")


def test_10_critical_temperature(criterion):
    rows = []
    for s in Scenario:
        M = scenario_constants(s).M
        rows.append((critical_gamma(M), critical_gamma_numeric(M)))
    err = max(abs(c - n) for c, n in rows)
    ordered = rows[0][1] > rows[1][1] > rows[2][1]
    criterion(10, "critical temperature", err <= 1e-5 and ordered,
              "gamma_c = " + ", ".join(f"{n:.7f}" for _, n in rows) + f", max err {err:.1e}")


def test_11_phase_diagram_ordering(criterion):
    eps = Axis("epsilon", 0, 0.995, 200).points()
    gamma = Axis("gamma", 0.03, 6, 200).points()
    t0 = time.perf_counter()
    frac = {s.value: region_fraction(phase_diagram(s, S, eps, gamma)) for s in Scenario}
    dt = time.perf_counter() - t0
    ordered = frac["local-uc"] < frac["global-uc"] < frac["ent-cloner"]
    criterion(11, "phase diagram area ordering", ordered and frac == GOLDEN_FRACTIONS and dt < 120.0,
              ", ".join(f"{k} {v:.6f}" for k, v in frac.items()) + f", {dt:.1f} s")


def _cli(args, threads):
    env = dict(os.environ, QCLONE_THREADS=str(threads))
    return subprocess.run([sys.executable, "-m", "qclone", *args], capture_output=True, env=env,
                          check=False)


def test_12_determinism(criterion):
    verify = ["verify", "--suite", "all", "--samples", "10000", "--seed", "42"]
    sweep = ["phase-diagram", "--scenario", "ent-cloner", "--epsilon-range", "0:0.99:100",
             "--gamma-range", "0.06:6:100,inf"]
    v1, v4 = _cli(verify, 1), _cli(verify, 4)
    s1, s4 = _cli(sweep, 1), _cli(sweep, 4)
    same = v1.stdout == v4.stdout and s1.stdout == s4.stdout and s1.stderr == s4.stderr
    codes = (v1.returncode, v4.returncode, s1.returncode, s4.returncode)
    criterion(12, "deterministic output", same and codes == (0, 0, 0, 0) and len(s1.stdout) > 0,
              f"exit codes {codes}, verify {len(v1.stdout)} bytes, sweep {len(s1.stdout)} bytes, "
              f"identical={same}")
