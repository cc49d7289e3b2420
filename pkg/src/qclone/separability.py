"""PPT entanglement detection and the closed-form inseparability tables.

The broadcast outputs are two-qubit X states, for which the partial
transpose test is exact.  The numeric verdict (:func:`is_entangled`,
:func:`pt_min_eigenvalue`) is treated as ground truth; the table
classifiers are closed-form predictions checked against it by
:func:`cross_validate`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from qclone import states
from qclone._parallel import concat_chunks
from qclone.broadcast import Scenario, l_from_m, scenario_constants, x_state
from qclone.matcore import check_density, min_eigenvalue, negativity, partial_transpose

PPT_TOL = 1e-10
RADICAND_CLAMP = 1e-12
GUARD = 1e-6
GAMMA_INF_PROXY = 1e3
GAMMA_ZERO_PROXY = 1e-6


class GammaLimit(str, enum.Enum):
    INFINITE = "inf"
    ZERO = "zero"


@dataclass(frozen=True)
class EntanglementVerdict:
    entangled: bool
    negativity: float
    min_pt_eigenvalue: float


def pt_min_eigenvalue(rho) -> np.ndarray:
    """Smallest eigenvalue of ``rho^{T_A}`` for a (stack of) two-qubit matrices."""
    return min_eigenvalue(partial_transpose(rho, "A"))


def is_entangled(rho, tol: float = PPT_TOL) -> EntanglementVerdict:
    rho = check_density(rho, dims=(4,))
    lam = float(pt_min_eigenvalue(rho))
    return EntanglementVerdict(
        entangled=lam < -tol, negativity=float(negativity(rho)), min_pt_eigenvalue=lam
    )


def _root(x: float) -> float:
    """Square root that clamps tiny negative radicands; nan when undefined."""
    if x < 0.0:
        if x < -RADICAND_CLAMP:
            return math.nan
        return 0.0
    return math.sqrt(x)


def _div(a: float, b: float) -> float:
    if b == 0.0:
        return math.nan if a == 0.0 else math.copysign(math.inf, a)
    return a / b


def critical_gamma(M: float) -> float:
    """``ln((M + 1 + 2 sqrt(M^2 + M)) / (3M - 1))``."""
    _check_m(M)
    return math.log((M + 1.0 + 2.0 * math.sqrt(M * M + M)) / (3.0 * M - 1.0))


def _check_m(M: float):
    if not M > 1.0 / 3.0:
        raise states.DomainError(f"boundary parameters need M > 1/3, got {M}")


def _xx_ratios(gamma: float) -> tuple[float, float]:
    """``(1/(1 + cosh g), tanh(g/2))`` without overflow; ``sinh/(1+cosh) = tanh(g/2)``."""
    x = math.exp(-gamma) if gamma != math.inf else 0.0
    return 2.0 * x / (1.0 + x) ** 2, math.tanh(gamma / 2.0)


@dataclass(frozen=True)
class BoundaryParams:
    """Separability boundaries; ``nan`` marks a value that is undefined here."""

    alpha1_inf: float
    alpha2_inf: float
    alpha_c: float
    gamma_c: float
    eps1: float
    eps2: float
    alpha0: float
    delta: float


def boundary_params(M: float, alpha: float, gamma: float, eps: float) -> BoundaryParams:
    """Evaluate every closed-form boundary at one parameter point.

    ``eps1`` takes the upper of each stacked sign pair and ``eps2`` the lower
    one, which is the reading that sends ``eps2`` to ``1 - 1/(3M)`` as
    ``gamma -> 0`` at ``delta = 1/2``.
    """
    _check_m(M)
    alpha = float(states.check_alpha(alpha))
    eps = float(states.check_epsilon(eps, allow_one=True))
    gamma = float(states._nonneg(gamma, "gamma"))
    delta = alpha * math.sqrt(1.0 - alpha * alpha)
    w, t = _xx_ratios(gamma)
    q = 4.0 * M * (1.0 - eps)

    eps1 = _div(M - 1.0 - 4.0 * M * delta, 2.0 * M * (w + t - 2.0 * delta))
    eps2 = _div(M - 1.0 + 4.0 * M * delta, 2.0 * M * (w - t + 2.0 * delta))
    return BoundaryParams(
        alpha1_inf=_div(_root((3 * M - 1) * (M + 1 - 4 * M * eps)), q),
        alpha2_inf=_div(_root((M + 1) * (3 * M - 1 - 4 * M * eps)), q),
        alpha_c=_root(3 * M * M + 2 * M - 1) / (4 * M),
        gamma_c=critical_gamma(M),
        eps1=eps1,
        eps2=eps2,
        alpha0=_div(_root((3 * M * (1 - eps) - 1) * (M * (1 - eps) + 1)), q),
        delta=delta,
    )


def classify_table1(M: float, alpha: float, gamma: float, eps: float) -> bool | None:
    """Closed-form verdict at finite temperature; ``None`` where not covered.

    Not covered: ``alpha == 0``, infinite ``gamma``, or ``eps`` outside [0, 1).
    """
    if alpha == 0.0 or not math.isfinite(gamma) or not 0.0 <= eps < 1.0:
        return None
    b = boundary_params(M, alpha, gamma, eps)
    near_singlet = abs(alpha * alpha - 0.5) < b.alpha_c
    if gamma > b.gamma_c:
        if near_singlet:
            if alpha > 0:
                return True
            return eps < b.eps1 or eps > b.eps2
        return eps > b.eps2
    if near_singlet:
        if alpha > 0:
            return eps < b.eps2
        return eps < b.eps1
    return False


def classify_table2(M: float, alpha: float, limit: GammaLimit | str, eps: float) -> bool | None:
    """Closed-form verdict in the zero- or infinite-temperature limit.

    Inside the window ``(1-M)/2M < eps < (3M-1)/4M``, where two rows overlap
    for ``alpha <= 0``, the clones are entangled if either row holds.
    """
    limit = GammaLimit(limit)
    if not 0.0 <= eps < 1.0:
        return None
    gamma = math.inf if limit is GammaLimit.INFINITE else 0.0
    b = boundary_params(M, alpha, gamma, eps)
    x = abs(alpha * alpha - 0.5)
    if limit is GammaLimit.ZERO:
        return eps < 1.0 - 1.0 / (3.0 * M) and x < b.alpha0

    k1 = (1.0 - M) / (2.0 * M)
    k2 = (3.0 * M - 1.0) / (4.0 * M)
    k3 = (M + 1.0) / (4.0 * M)
    if alpha > 0:
        return (eps <= k1 and x < b.alpha1_inf) or eps > k1
    return (
        (eps < k2 and x < b.alpha2_inf)
        or (k1 < eps <= k3 and x > b.alpha1_inf)
        or eps > k3
    )


def _boundary_distance(M: float, alpha: float, gamma: float, eps: float, table: str) -> float:
    """Distance in (alpha^2, eps, gamma) to the nearest boundary the table uses."""
    b = boundary_params(M, alpha, gamma, eps)
    x = abs(alpha * alpha - 0.5)
    if table == "table1":
        cands = [abs(alpha), abs(gamma - b.gamma_c), abs(x - b.alpha_c),
                 abs(eps - b.eps1), abs(eps - b.eps2)]
    elif table == "inf":
        cands = [abs(alpha), abs(eps - (1 - M) / (2 * M)), abs(eps - (3 * M - 1) / (4 * M)),
                 abs(eps - (M + 1) / (4 * M)), abs(x - b.alpha1_inf), abs(x - b.alpha2_inf)]
    else:
        cands = [abs(eps - (1 - 1 / (3 * M))), abs(x - b.alpha0)]
    cands = [c for c in cands if not math.isnan(c)]
    return min(cands)


def _classify(M, alpha, gamma, eps, table):
    if table == "table1":
        return classify_table1(M, alpha, gamma, eps)
    return classify_table2(M, alpha, table, eps)


@dataclass
class CrossValidationReport:
    scenario: str
    table: str
    samples: int
    excluded: int
    mismatches: int
    worst_margin: float
    mismatch_points: list = field(default_factory=list)

    def csv_row(self) -> str:
        return f"{self.scenario}:{self.table},{self.samples},{self.mismatches},{self.worst_margin:.17g}"


CSV_HEADER = "scenario,samples,mismatches,worst_margin"


def numeric_pt_min(alpha, eps, gamma, M: float, L: float) -> np.ndarray:
    """Minimum PT eigenvalue of the broadcast output over arrays of points."""
    alpha, eps, gamma = np.broadcast_arrays(
        np.asarray(alpha, float), np.asarray(eps, float), np.asarray(gamma, float)
    )
    shape = alpha.shape
    a, e, g = alpha.ravel(), eps.ravel(), gamma.ravel()

    def chunk(i, j):
        return pt_min_eigenvalue(x_state(a[i:j], e[i:j], g[i:j], M, L))

    return concat_chunks(chunk, a.size).reshape(shape)


def cross_validate(
    scenario: Scenario | str, alpha, eps, gamma=None, table: str = "table1", guard: float = GUARD
) -> CrossValidationReport:
    """Compare a table classifier with numeric PPT over sample points.

    ``table`` is ``"table1"`` (finite ``gamma`` from the samples), ``"inf"``
    or ``"zero"``; the limits are evaluated numerically at ``gamma = 1e3`` and
    ``1e-6``.  Points within ``guard`` of a predicted boundary are skipped.
    ``worst_margin`` is the smallest ``|min PT eigenvalue|`` among the
    compared points.
    """
    scenario = Scenario(scenario)
    k = scenario_constants(scenario)
    alpha = np.asarray(alpha, float).ravel()
    eps = np.asarray(eps, float).ravel()
    if table == "table1":
        gamma = np.asarray(gamma, float).ravel()
    elif table in ("inf", "zero"):
        proxy = GAMMA_INF_PROXY if table == "inf" else GAMMA_ZERO_PROXY
        gamma = np.full(alpha.shape, proxy)
    else:
        raise ValueError(f"unknown table {table!r}")

    lam = numeric_pt_min(alpha, eps, gamma, k.M, k.L)
    compared = excluded = mismatches = 0
    worst = math.inf
    points = []
    for a, e, g, l in zip(alpha.tolist(), eps.tolist(), gamma.tolist(), lam.tolist()):
        g_table = g if table == "table1" else (math.inf if table == "inf" else 0.0)
        predicted = _classify(k.M, a, g, e, table)
        if predicted is None or _boundary_distance(k.M, a, g_table, e, table) < guard:
            excluded += 1
            continue
        compared += 1
        worst = min(worst, abs(l))
        if predicted != (l < -PPT_TOL):
            mismatches += 1
            points.append((a, e, g, l, predicted))
    return CrossValidationReport(
        scenario=scenario.value, table=table, samples=compared, excluded=excluded,
        mismatches=mismatches, worst_margin=worst, mismatch_points=points,
    )


def find_eps_boundary(
    M: float, alpha: float, gamma: float, L: float | None = None,
    n_scan: int = 1024, xtol: float = 1e-10,
) -> list[float]:
    """Dilutions in [0, 1) where the output's min PT eigenvalue changes sign."""
    if not math.isfinite(gamma):
        raise states.DomainError("find_eps_boundary needs a finite gamma")
    L = l_from_m(M) if L is None else L

    def f(e):
        return float(numeric_pt_min(alpha, e, gamma, M, L))

    grid = np.arange(n_scan) / n_scan
    vals = numeric_pt_min(alpha, grid, gamma, M, L)
    roots = []
    for i in range(n_scan - 1):
        if vals[i] == 0.0:
            roots.append(float(grid[i]))
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(bisect(f, grid[i], grid[i + 1], xtol=xtol))
    return roots


def critical_gamma_numeric(
    M: float, alpha: float = 1 / math.sqrt(2), L: float | None = None, xtol: float = 1e-12
) -> float:
    """Temperature below which the clones stop being entangled for every dilution.

    The output is affine in ``eps``, so entanglement for all ``eps < 1``
    reduces to a sign test at the ``eps = 1`` end point, which is bisected in
    ``gamma``.
    """
    L = l_from_m(M) if L is None else L

    def f(g):
        return float(numeric_pt_min(alpha, 1.0, g, M, L))

    lo, hi = 1e-6, 50.0
    if not f(lo) > 0.0 > f(hi):
        raise states.DomainError(f"no entanglement transition in gamma for M={M}, alpha={alpha}")
    return bisect(f, lo, hi, xtol=xtol)
