"""Seeded property suites behind ``qclone verify``.

Every check reports a worst residual and, on failure, the parameter point
that broke it.  Sampling goes through :class:`qclone.rng.SplitMix64`, so a
given ``(samples, seed)`` pair always produces the same report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from qclone import broadcast, separability, singleclone, states
from qclone.broadcast import Scenario
from qclone.matcore import (
    dagger,
    eigvalsh,
    fidelity,
    fidelity_pure,
    format_float,
    hermitian_eig,
    partial_trace,
    projector,
    psd_sqrt,
)
from qclone.rng import SplitMix64

SUITES = ("closedform", "oracles", "tables")
EQUIV_TOL = 1e-12


@dataclass
class Check:
    name: str
    passed: bool
    residual: float = 0.0
    detail: str = ""


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    @property
    def worst_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def summary(self) -> str:
        return f"{self.suite},{self.passed},{self.failed},{format_float(self.worst_residual)}"

    def add(self, name, passed, residual=0.0, detail=""):
        self.checks.append(Check(name, bool(passed), float(residual), detail))


def _worst(values, points) -> tuple[float, str]:
    """Largest value and a description of where it occurs."""
    values = np.asarray(values, float)
    i = int(np.nanargmax(values))
    return float(values[i]), ", ".join(f"{k}={format_float(v[i])}" for k, v in points.items())


def _fmt_point(**kw) -> str:
    return ", ".join(f"{k}={format_float(v)}" for k, v in kw.items())


# -- closed-form single-clone fidelity ------------------------------------


def run_closedform(samples: int, seed: int) -> SuiteResult:
    res = SuiteResult("closedform")
    rng = SplitMix64(seed)
    n = max(samples, 8)

    theta = rng.uniform(0.0, math.pi, n)
    phi = rng.uniform(0.0, 2 * math.pi, n)
    eta = rng.uniform(0.0, 20.0, n)
    eta[::8] = math.inf
    eps = rng.uniform(0.0, 1.0, n)

    fc = singleclone.fidelity_closed_form("uc", theta, 0.0, eta)
    fn = singleclone.fidelity_numeric("uc", theta, phi, 0.0, eta)
    dev = np.maximum(np.abs(fc - 5 / 6), np.abs(fn - 5 / 6))
    r, where = _worst(dev, dict(theta=theta, phi=phi, eta=eta))
    res.add("uc_ideal_fidelity_5/6", r <= EQUIV_TOL, r, where)

    for m in singleclone.Machine:
        fc = singleclone.fidelity_closed_form(m, theta, eps, eta)
        fn = singleclone.fidelity_numeric(m, theta, phi, eps, eta)
        r, where = _worst(np.abs(fc - fn), dict(theta=theta, epsilon=eps, eta=eta, phi=phi))
        res.add(f"closed_vs_numeric[{m.value}]", r <= EQUIV_TOL, r, where)

    k = max(n // 10, 1)
    phis = np.arange(8) * (2 * math.pi / 8)
    for m in singleclone.Machine:
        f = singleclone.fidelity_numeric(
            m, theta[:k, None], phis[None, :], eps[:k, None], eta[:k, None]
        )
        spread = np.ptp(f, axis=1)
        r, where = _worst(spread, dict(theta=theta[:k], epsilon=eps[:k], eta=eta[:k]))
        res.add(f"phi_independence[{m.value}]", r <= EQUIV_TOL, r, where)

    etas = np.array([0.0, 1.0, 10.0, math.inf])
    for m in singleclone.Machine:
        f = singleclone.fidelity_numeric(m, math.pi / 2, 0.0, eps[:k, None], etas[None, :])
        fc = singleclone.fidelity_closed_form(m, math.pi / 2, eps[:k, None], etas[None, :])
        spread = np.maximum(np.ptp(f, axis=1), np.ptp(fc, axis=1))
        r, where = _worst(spread, dict(epsilon=eps[:k]))
        res.add(f"equatorial_temperature_invariance[{m.value}]", r <= EQUIV_TOL, r, where)

    f = singleclone.fidelity_closed_form("uc", theta, eps, eta)
    predicted = eps < singleclone.classical_threshold(theta, eta)
    clear = np.abs(f - 0.5) >= 1e-9
    bad = clear & (predicted != singleclone.beats_classical(f))
    detail = ""
    if np.any(bad):
        i = int(np.argmax(bad))
        detail = _fmt_point(theta=theta[i], epsilon=eps[i], eta=eta[i], F=f[i])
    res.add("classical_threshold_consistency", not np.any(bad), 0.0, detail)

    h, e0 = 1e-5, 0.5

    def slope(t):
        fp = singleclone.fidelity_closed_form("pcc", t, e0 + h, 1e3)
        fm = singleclone.fidelity_closed_form("pcc", t, e0 - h, 1e3)
        return float((fp - fm) / (2 * h))

    s1, s2 = slope(1.0), slope(2.8)
    res.add("pcc_slope_sign_change", s1 < 0 < s2, 0.0, f"dF/deps(1.0)={s1:.6g}, dF/deps(2.8)={s2:.6g}")

    th, ep = np.meshgrid(np.linspace(0.0, 0.5, 11), np.linspace(0.8, 0.99, 11), indexing="ij")
    gap = singleclone.fidelity_closed_form("uc", th, ep, 1e3) - singleclone.fidelity_closed_form(
        "pcc", th, ep, 1e3
    )
    res.add("uc_beats_pcc_region_exists", np.any(gap > 0), 0.0, f"max F_UC - F_PCC = {gap.max():.6g}")
    return res


# -- channel oracles and linear algebra ------------------------------------


def _random_hermitian(rng, n, d):
    x = rng.uniform(-1, 1, n * d * d).reshape(n, d, d) + 1j * rng.uniform(-1, 1, n * d * d).reshape(n, d, d)
    return 0.5 * (x + dagger(x))


def _random_density(rng, n, d):
    x = rng.uniform(-1, 1, n * d * d).reshape(n, d, d) + 1j * rng.uniform(-1, 1, n * d * d).reshape(n, d, d)
    rho = x @ dagger(x)
    return rho / np.trace(rho, axis1=-2, axis2=-1)[:, None, None]


def run_oracles(samples: int, seed: int) -> SuiteResult:
    res = SuiteResult("oracles")
    rng = SplitMix64(seed ^ 0x5EED)
    n = max(samples, 8)
    k = max(n // 10, 1)

    for d in (2, 4):
        h = _random_hermitian(rng, k, d)
        w, v = hermitian_eig(h)
        recon = np.max(np.abs(h - (v * w[..., None, :]) @ dagger(v)), axis=(-2, -1))
        orth = np.max(np.abs(dagger(v) @ v - np.eye(d)), axis=(-2, -1))
        r = float(max(recon.max(), orth.max()))
        res.add(f"hermitian_eig_residual[{d}]", r <= 1e-11, r, f"sample {int(np.argmax(np.maximum(recon, orth)))}")

    for d in (2, 4):
        rho = _random_density(rng, k, d)
        sigma = _random_density(rng, k, d)
        f1, f2 = fidelity(rho, sigma), fidelity(sigma, rho)
        sym = float(np.max(np.abs(f1 - f2)))
        in_range = bool(np.all((f1 >= 0) & (f1 <= 1)))
        res.add(f"fidelity_symmetric[{d}]", sym <= 1e-10 and in_range, sym)
        self_dev = float(np.max(np.abs(fidelity(rho, rho) - 1.0)))
        res.add(f"fidelity_self[{d}]", self_dev <= 1e-9, self_dev)
        root = psd_sqrt(rho)
        sq = float(np.max(np.abs(root @ root - rho)))
        res.add(f"psd_sqrt_square[{d}]", sq <= 1e-10, sq)

    psi = rng.uniform(-1, 1, 2 * k * 2).reshape(k, 2, 2) @ np.array([1.0, 1j])
    psi /= np.linalg.norm(psi, axis=-1, keepdims=True)
    rho = _random_density(rng, k, 2)
    dev = float(np.max(np.abs(fidelity_pure(psi, rho) - fidelity(projector(psi), rho))))
    res.add("fidelity_pure_matches_uhlmann", dev <= 1e-10, dev)

    consts = {s: broadcast.scenario_constants(s) for s in Scenario}
    m_iii = (2 + math.sqrt(13)) / 9
    const_dev = max(
        abs(consts[Scenario.LOCAL_UC].M - 4 / 9),
        abs(consts[Scenario.GLOBAL_UC].M - 3 / 5),
        abs(consts[Scenario.ENT_CLONER].M - m_iii),
        abs(consts[Scenario.LOCAL_UC].L - 1 / 3),
        abs(consts[Scenario.GLOBAL_UC].L - 3 / 10),
        abs(consts[Scenario.ENT_CLONER].L - 3 * (1 + 2 * m_iii) / 26),
    )
    res.add("scenario_constants", const_dev <= 1e-14, const_dev)

    alpha = rng.uniform(-1, 1, n)
    eps = rng.uniform(0, 1, n)
    gamma = rng.uniform(0, 10, n)
    gamma[::16] = math.inf
    pts = dict(alpha=alpha, epsilon=eps, gamma=gamma)
    rho_in = broadcast.diluted_input(alpha, eps, gamma)

    marg = max(
        float(np.max(np.abs(partial_trace(states.thermal_xx(gamma), keep) - np.eye(2) / 2)))
        for keep in "AB"
    )
    res.add("thermal_xx_marginals_maximally_mixed", marg <= 1e-12, marg)

    for s in Scenario:
        out = broadcast.broadcast_output(alpha, eps, gamma, s)
        tr = np.abs(np.trace(out, axis1=-2, axis2=-1) - 1.0)
        neg = np.clip(-eigvalsh(out)[..., 0], 0.0, None)
        r, where = _worst(np.maximum(tr, neg), pts)
        ok = tr.max() <= 1e-12 and eigvalsh(out)[..., 0].min() >= -1e-10
        res.add(f"eq4_trace_and_psd[{s.value}]", ok, r, where)

    out = broadcast.broadcast_output(alpha, eps, gamma, Scenario.LOCAL_UC)
    r, where = _worst(np.max(np.abs(out - broadcast.local_uc_oracle(rho_in)), axis=(-2, -1)), pts)
    res.add("local_uc_oracle_equivalence", r <= EQUIV_TOL, r, where)

    out = broadcast.broadcast_output(alpha, eps, gamma, Scenario.GLOBAL_UC)
    ref = broadcast.global_depolarize_oracle(rho_in, 3 / 5)
    r, where = _worst(np.max(np.abs(out - ref), axis=(-2, -1)), pts)
    res.add("global_depolarize_oracle_equivalence", r <= EQUIV_TOL, r, where)

    def compact_residual(s, a, e, g):
        out = broadcast.broadcast_output(a, e, g, s)
        ref = broadcast.global_depolarize_oracle(
            broadcast.diluted_input(a, e, g), consts[Scenario(s)].M
        )
        return np.max(np.abs(out - ref), axis=(-2, -1))

    tol = broadcast.COMPACT_FORM_TOL
    r, where = _worst(compact_residual(Scenario.GLOBAL_UC, alpha, eps, gamma), pts)
    res.add("compact_form[global-uc]_everywhere", r <= tol, r, where)

    on_set_alpha = np.where(np.arange(n) % 2 == 0, 1 / math.sqrt(2), -1 / math.sqrt(2))
    r_on = max(
        float(compact_residual(Scenario.ENT_CLONER, on_set_alpha, eps, gamma).max()),
        float(compact_residual(Scenario.ENT_CLONER, alpha, 1.0, gamma).max()),
    )
    off = compact_residual(Scenario.ENT_CLONER, alpha, eps, gamma)
    holds_off = off <= tol
    detail = ""
    if np.any(holds_off):
        i = int(np.argmax(holds_off))
        detail = "holds off the set at " + _fmt_point(alpha=alpha[i], epsilon=eps[i], gamma=gamma[i])
    res.add("compact_form[ent-cloner]_only_on_eps1_or_singlet", r_on <= tol and not np.any(holds_off), r_on, detail)

    local = compact_residual(Scenario.LOCAL_UC, alpha, eps, gamma)
    res.notes.append(
        f"compact_form[local-uc]: holds at {int(np.sum(local <= tol))}/{n} sampled points, "
        f"max residual {format_float(local.max())}"
    )
    return res


# -- inseparability tables --------------------------------------------------


def run_tables(samples: int, seed: int) -> SuiteResult:
    res = SuiteResult("tables")
    rng = SplitMix64(seed ^ 0x7AB1E5)
    n = max(samples, 8)
    alpha = rng.uniform(-1, 1, n)
    eps = rng.uniform(0, 1, n)
    gamma = rng.uniform(0, 6, n)

    for s in Scenario:
        for table in ("table1", "inf", "zero"):
            rep = separability.cross_validate(s, alpha, eps, gamma, table)
            detail = f"{rep.samples} compared, {rep.excluded} in guard band"
            if rep.mismatches:
                a, e, g, lam, pred = rep.mismatch_points[0]
                detail += "; first mismatch " + _fmt_point(alpha=a, epsilon=e, gamma=g, min_pt_eig=lam)
            res.add(f"table_vs_ppt[{s.value}:{table}]", rep.mismatches == 0, 0.0, detail)
            res.notes.append(rep.csv_row())

    gcs = []
    for s in Scenario:
        M = broadcast.scenario_constants(s).M
        closed = separability.critical_gamma(M)
        numeric = separability.critical_gamma_numeric(M)
        gcs.append(closed)
        err = abs(closed - numeric)
        res.add(f"critical_gamma[{s.value}]", err <= 1e-5, err,
                f"closed={format_float(closed)}, numeric={format_float(numeric)}")
    res.add("critical_gamma_decreasing_in_M", gcs[0] > gcs[1] > gcs[2], 0.0,
            ", ".join(format_float(g) for g in gcs))

    dev = 0.0
    for s in Scenario:
        M = broadcast.scenario_constants(s).M
        b = separability.boundary_params(M, 0.3, 1.0, 0.0)
        dev = max(dev, abs(b.alpha0 - b.alpha_c))
    res.add("alpha0_at_eps0_equals_alpha_c", dev <= 1e-14, dev)

    dev = 0.0
    for s in Scenario:
        M = broadcast.scenario_constants(s).M
        for g in (1e-6, 1e-8, 1e-10):
            e2 = separability.boundary_params(M, 1 / math.sqrt(2), g, 0.0).eps2
            first_order = (1 - 1 / (3 * M)) * (1 + g / 3)
            dev = max(dev, abs(e2 - first_order))
    res.add("eps2_zero_temperature_limit", dev <= 1e-9, dev)

    asym = [
        (a, e, g) for a, e, g in zip(np.abs(alpha[:200]), eps[:200], gamma[:200])
        if a > 0 and separability.classify_table1(3 / 5, a, g, e)
        != separability.classify_table1(3 / 5, -a, g, e)
    ]
    res.add("table1_sign_asymmetry_exists", len(asym) > 0, 0.0, f"{len(asym)} asymmetric points")

    roots = separability.find_eps_boundary(3 / 5, 1.0, 2.0)
    e2 = separability.boundary_params(3 / 5, 1.0, 2.0, 0.0).eps2
    err = abs(roots[0] - e2) if len(roots) == 1 else math.inf
    res.add("eps_boundary_bisection_matches_eps2", err <= 1e-8, err, f"roots={roots}")
    return res


RUNNERS = {"closedform": run_closedform, "oracles": run_oracles, "tables": run_tables}


def run(suite: str, samples: int, seed: int) -> list[SuiteResult]:
    names = SUITES if suite == "all" else (suite,)
    return [RUNNERS[name](samples, seed) for name in names]


def render(results: list[SuiteResult]) -> str:
    lines = []
    for r in results:
        for c in r.checks:
            status = "PASS" if c.passed else "FAIL"
            line = f"{status} {r.suite}/{c.name} residual={format_float(c.residual)}"
            if c.detail and not c.passed:
                line += f" at {c.detail}"
            elif c.detail:
                line += f" ({c.detail})"
            lines.append(line)
        lines.extend(f"INFO {r.suite}/{note}" for note in r.notes)
    lines.append("suite,passed,failed,worst_residual")
    lines.extend(r.summary() for r in results)
    if len(results) > 1:
        total_p = sum(r.passed for r in results)
        total_f = sum(r.failed for r in results)
        worst = max(r.worst_residual for r in results)
        lines.append(f"all,{total_p},{total_f},{format_float(worst)}")
    return "\n".join(lines) + "\n"
