"""Parameter grids and CSV tables for fidelity curves and phase diagrams."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from qclone import singleclone
from qclone._parallel import concat_chunks
from qclone.broadcast import Scenario, broadcast_output
from qclone.matcore import check_density, format_float, negativity
from qclone.separability import PPT_TOL, pt_min_eigenvalue

AXIS_NAMES = ("theta", "phi", "epsilon", "eta", "alpha", "gamma")
FIDELITY_HEADER = ["machine", "theta", "epsilon", "eta", "F_closed", "F_numeric", "beats_classical"]
PHASE_HEADER = ["scenario", "alpha", "epsilon", "gamma", "entangled", "negativity", "min_pt_eig"]
CLOSED_NUMERIC_TOL = 1e-12


class SweepError(ValueError):
    pass


@dataclass(frozen=True)
class Axis:
    """Inclusive linear axis; ``count == 1`` yields just ``start``.

    Infinity is only accepted as a single point (``start == stop == inf``)
    on the ``eta`` and ``gamma`` axes.
    """

    name: str
    start: float
    stop: float
    count: int = 1

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise SweepError(f"unknown axis {self.name!r}")
        if self.count < 1:
            raise SweepError(f"axis {self.name}: count must be >= 1")
        if not self.start <= self.stop:
            raise SweepError(f"axis {self.name}: start must not exceed stop")
        if math.isinf(self.start) or math.isinf(self.stop):
            if self.name not in ("eta", "gamma"):
                raise SweepError(f"axis {self.name} does not accept infinity")
            if not (self.start == self.stop == math.inf and self.count == 1):
                raise SweepError("infinity must be a single dedicated grid point")

    def points(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start], dtype=float)
        k = np.arange(self.count, dtype=float)
        return self.start + k * (self.stop - self.start) / (self.count - 1)


def join_points(*axes: Axis) -> np.ndarray:
    """Concatenate several axis segments (e.g. a range plus an ``inf`` point)."""
    return np.concatenate([a.points() for a in axes])


def _grid(*values):
    mesh = np.meshgrid(*[np.asarray(v, float) for v in values], indexing="ij")
    return [m.ravel() for m in mesh]


def sweep_fidelity(machine, theta, epsilon, eta, phi: float = 0.0) -> list[list]:
    """Fidelity rows over the ``theta x epsilon x eta`` grid, theta slowest.

    Each row carries the closed form and the matrix-pipeline value; a
    disagreement above 1e-12 raises rather than being written out.
    """
    machine = singleclone.Machine(machine)
    th, ep, et = _grid(theta, epsilon, eta)

    def chunk(i, j):
        fc = singleclone.fidelity_closed_form(machine, th[i:j], ep[i:j], et[i:j])
        fn = singleclone.fidelity_numeric(machine, th[i:j], phi, ep[i:j], et[i:j])
        return np.stack([np.broadcast_to(fc, fn.shape), fn], axis=-1)

    f = concat_chunks(chunk, th.size).reshape(-1, 2)
    bad = np.abs(f[:, 0] - f[:, 1]) > CLOSED_NUMERIC_TOL
    if not np.all(np.isfinite(f)) or np.any(bad):
        i = int(np.argmax(bad | ~np.isfinite(f).all(axis=1)))
        raise SweepError(
            f"closed form and numeric fidelity disagree at theta={th[i]}, "
            f"epsilon={ep[i]}, eta={et[i]}: {f[i, 0]} vs {f[i, 1]}"
        )
    beats = singleclone.beats_classical(f[:, 0])
    return [
        [machine.value, th[i], ep[i], et[i], f[i, 0], f[i, 1], bool(beats[i])]
        for i in range(th.size)
    ]


def phase_diagram(scenario, alpha: float, epsilon, gamma) -> list[list]:
    """Numeric PPT raster over ``epsilon x gamma`` (epsilon slowest)."""
    scenario = Scenario(scenario)
    ep, ga = _grid(epsilon, gamma)

    def chunk(i, j):
        rho = check_density(broadcast_output(alpha, ep[i:j], ga[i:j], scenario), dims=(4,))
        return np.stack([pt_min_eigenvalue(rho), negativity(rho)], axis=-1)

    res = concat_chunks(chunk, ep.size).reshape(-1, 2)
    if not np.all(np.isfinite(res)):
        raise SweepError("non-finite value in phase diagram")
    return [
        [scenario.value, float(alpha), ep[i], ga[i], bool(res[i, 0] < -PPT_TOL), res[i, 1], res[i, 0]]
        for i in range(ep.size)
    ]


def region_fraction(rows) -> float:
    """Fraction of phase-diagram rows flagged entangled."""
    rows = list(rows)
    if not rows:
        raise SweepError("empty raster")
    col = PHASE_HEADER.index("entangled")
    return sum(1 for r in rows if r[col]) / len(rows)


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    return str(v)


def write_csv(header, rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    write_csv(header, rows, buf)
    return buf.getvalue()
