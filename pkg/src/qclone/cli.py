"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 malformed flags,
3 parameter outside its physical domain.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from qclone import broadcast, separability, singleclone, states, sweep, verify
from qclone.broadcast import Scenario
from qclone.matcore import dump_matrix, format_float
from qclone.sweep import Axis

EXIT_VERIFY_FAILED = 1
EXIT_DOMAIN = 3


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _range(name: str):
    """Parse ``a:b:n`` segments (or single values, incl. ``inf``) joined by commas."""

    def parse(text: str) -> np.ndarray:
        axes = []
        try:
            for part in text.split(","):
                fields = part.split(":")
                if len(fields) == 1:
                    v = float(fields[0])
                    axes.append(Axis(name, v, v, 1))
                elif len(fields) == 3:
                    axes.append(Axis(name, float(fields[0]), float(fields[1]), int(fields[2])))
                else:
                    raise ValueError(f"expected start:stop:count, got {part!r}")
        except (ValueError, sweep.SweepError) as exc:
            raise argparse.ArgumentTypeError(f"--{name}-range: {exc}") from None
        return sweep.join_points(*axes)

    return parse


def _emit(lines: dict) -> None:
    for k, v in lines.items():
        if isinstance(v, bool):
            v = "true" if v else "false"
        elif isinstance(v, (float, np.floating)):
            v = format_float(v)
        print(f"{k}={v}")


def _check_eps(eps):
    states.check_epsilon(eps)


def cmd_fidelity(args) -> int:
    _check_eps(args.epsilon)
    fc = float(singleclone.fidelity_closed_form(args.machine, args.theta, args.epsilon, args.eta, args.orbit))
    fn = float(singleclone.fidelity_numeric(args.machine, args.theta, args.phi, args.epsilon, args.eta, args.orbit))
    _emit({
        "machine": args.machine,
        "F_closed": fc,
        "F_numeric": fn,
        "abs_diff": abs(fc - fn),
        "beats_classical": bool(singleclone.beats_classical(fc)),
        "classical_threshold": float(singleclone.classical_threshold(args.theta, args.eta)),
    })
    return 0


def cmd_clone(args) -> int:
    _check_eps(args.epsilon)
    out = singleclone.cloned_state(args.machine, args.theta, args.phi, args.epsilon, args.eta, args.orbit)
    if args.emit_matrix:
        sys.stdout.write(dump_matrix(out))
        return 0
    p = singleclone.shrink_params(args.machine, args.theta if args.orbit is None else args.orbit)
    _emit({
        "machine": args.machine,
        "mu": float(p.mu),
        "nu": float(p.nu),
        "rho00": out[0, 0].real,
        "rho01_re": out[0, 1].real,
        "rho01_im": out[0, 1].imag,
        "rho11": out[1, 1].real,
        "F": float(singleclone.fidelity_numeric(args.machine, args.theta, args.phi, args.epsilon, args.eta, args.orbit)),
    })
    return 0


def _table_verdict(M, alpha, eps, gamma):
    if math.isinf(gamma):
        v = separability.classify_table2(M, alpha, "inf", eps)
    elif gamma == 0.0:
        v = separability.classify_table2(M, alpha, "zero", eps)
    else:
        v = separability.classify_table1(M, alpha, gamma, eps)
    return "not-covered" if v is None else ("true" if v else "false")


def cmd_broadcast(args) -> int:
    _check_eps(args.epsilon)
    k = broadcast.scenario_constants(args.scenario)
    rho = broadcast.broadcast_output(args.alpha, args.epsilon, args.gamma, args.scenario)
    verdict = separability.is_entangled(rho)
    holds, resid = broadcast.compact_form_check(args.alpha, args.epsilon, args.gamma, args.scenario)
    _emit({
        "scenario": args.scenario,
        "M": k.M,
        "L": k.L,
        "entangled": verdict.entangled,
        "negativity": verdict.negativity,
        "min_pt_eig": verdict.min_pt_eigenvalue,
        "table_entangled": _table_verdict(k.M, args.alpha, args.epsilon, args.gamma),
        "compact_form_holds": holds,
        "compact_form_residual": resid,
    })
    if args.emit_matrix:
        sys.stdout.write(dump_matrix(rho))
    return 0


def cmd_boundaries(args) -> int:
    _check_eps(args.epsilon)
    M = broadcast.scenario_constants(args.scenario).M
    b = separability.boundary_params(M, args.alpha, args.gamma, args.epsilon)
    _emit({"scenario": args.scenario, "M": M, **{k: v for k, v in vars(b).items()}})
    return 0


def _write(header, rows, path) -> None:
    if path == "-":
        sweep.write_csv(header, rows, sys.stdout)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        sweep.write_csv(header, rows, fh)


def cmd_sweep_fidelity(args) -> int:
    if np.any(args.epsilon_range >= 1.0):
        raise states.DomainError("epsilon must lie in [0, 1)")
    rows = sweep.sweep_fidelity(args.machine, args.theta_range, args.epsilon_range, args.eta_range, args.phi)
    _write(sweep.FIDELITY_HEADER, rows, args.out)
    return 0


def cmd_phase_diagram(args) -> int:
    if np.any(args.epsilon_range >= 1.0):
        raise states.DomainError("epsilon must lie in [0, 1)")
    rows = sweep.phase_diagram(args.scenario, args.alpha, args.epsilon_range, args.gamma_range)
    _write(sweep.PHASE_HEADER, rows, args.out)
    if args.out != "-":
        print(f"entangled_fraction={format_float(sweep.region_fraction(rows))}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    results = verify.run(args.suite, args.samples, args.seed)
    sys.stdout.write(verify.render(results))
    return 0 if all(r.failed == 0 for r in results) else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qclone",
        description="Quantum cloning of thermally diluted states: fidelities, "
        "broadcast outputs, separability tables and sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    machines = [m.value for m in singleclone.Machine]
    scenarios = [s.value for s in Scenario]

    def single(p):
        p.add_argument("--machine", choices=machines, required=True)
        p.add_argument("--theta", type=_float, required=True)
        p.add_argument("--phi", type=_float, default=0.0)
        p.add_argument("--epsilon", type=_float, required=True)
        p.add_argument("--eta", type=_float, required=True, help="omega0*beta/2; 'inf' allowed")
        p.add_argument("--orbit", type=_float, default=None, help="PCC design orbit (default: theta)")

    def pair(p):
        p.add_argument("--scenario", choices=scenarios, required=True)
        p.add_argument("--alpha", type=_float, required=True)
        p.add_argument("--epsilon", type=_float, required=True)
        p.add_argument("--gamma", type=_float, required=True, help="2*beta*J; 'inf' allowed")

    p = sub.add_parser("fidelity", help="closed-form and numeric clone fidelity")
    single(p)
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("clone", help="clone density matrix")
    single(p)
    p.add_argument("--emit-matrix", action="store_true")
    p.set_defaults(func=cmd_clone)

    p = sub.add_parser("broadcast", help="broadcast output state and PPT verdict")
    pair(p)
    p.add_argument("--emit-matrix", action="store_true")
    p.set_defaults(func=cmd_broadcast)

    p = sub.add_parser("boundaries", help="closed-form separability boundaries")
    pair(p)
    p.set_defaults(func=cmd_boundaries)

    p = sub.add_parser("sweep-fidelity", help="fidelity grid as CSV")
    p.add_argument("--machine", choices=machines, required=True)
    p.add_argument("--theta-range", type=_range("theta"), required=True)
    p.add_argument("--epsilon-range", type=_range("epsilon"), required=True)
    p.add_argument("--eta-range", type=_range("eta"), required=True)
    p.add_argument("--phi", type=_float, default=0.0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_sweep_fidelity)

    p = sub.add_parser("phase-diagram", help="entanglement raster as CSV")
    p.add_argument("--scenario", choices=scenarios, required=True)
    p.add_argument("--alpha", type=_float, default=1 / math.sqrt(2))
    p.add_argument("--epsilon-range", type=_range("epsilon"), required=True)
    p.add_argument("--gamma-range", type=_range("gamma"), required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_phase_diagram)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--suite", choices=[*verify.SUITES, "all"], default="all")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except states.DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
