"""Command-line interface: ``sublqt design|verify|simulate|reproduce-example``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .config import dump_certificate, load_certificate, load_config
from .costsim import (
    build_closed_loop,
    consensus_reached,
    error_state,
    exact_cost,
    simulate,
    write_trajectory_csv,
)
from .design import CaseBCoefficient, synthesize, verify_certificate
from .errors import ConfigError, DivergenceError, InfiniteCostError, SublqtError
from .example import format_table, reproduce, rng
from .graph import gamma_spectrum

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

CONSENSUS_TOL = 1e-2


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _design_request(args):
    cfg = load_config(args.config)
    if getattr(args, "case_b_coefficient", None):
        cfg = cfg.model_copy(
            update={"design": cfg.design.model_copy(update={"case_b_coefficient": CaseBCoefficient(args.case_b_coefficient)})}
        )
    return cfg, cfg.design_request()


def _print_report(report, stream=sys.stderr) -> None:
    for m in report.modes:
        print(
            f"mode {m.index}: lambda = {m.eigenvalue:.6f}  hurwitz = {m.hurwitz}  inequality = {m.inequality_ok}",
            file=stream,
        )
    print(f"radius r = {report.radius:g}: P < (gamma/r^2) I holds = {report.radius_ok}", file=stream)


def cmd_design(args) -> int:
    _, req = _design_request(args)
    spectrum = gamma_spectrum(req.network)
    cert = synthesize(req, spectrum)
    report = verify_certificate(cert, req, spectrum)
    _emit(dump_certificate(cert, report), args.out)
    _print_report(report)
    if not report.modes_ok:
        print("certificate verification failed", file=sys.stderr)
        return EXIT_FAILED
    if not cert.requested_radius_ok:
        print(
            f"requested radius {cert.requested_radius:g} exceeds admissible {cert.admissible_radius:.4f}",
            file=sys.stderr,
        )
        return EXIT_FAILED
    return EXIT_OK


def cmd_verify(args) -> int:
    _, req = _design_request(args)
    cert = load_certificate(args.gain)
    spectrum = gamma_spectrum(req.network)
    report = verify_certificate(cert, req, spectrum)
    _print_report(report, sys.stdout)

    # Sampled soundness check: exact cost below gamma on the sphere of the requested radius.
    if report.modes_ok and args.samples > 0:
        cl = build_closed_loop(req.agent, req.network, cert.k, req.cost)
        gen = rng()
        worst = 0.0
        for _ in range(args.samples):
            d = gen.standard_normal(cl.a_cl.shape[0])
            worst = max(worst, exact_cost(cl, req.cost.radius * d / np.linalg.norm(d)))
        print(f"sampled worst-case cost on |e0| = {req.cost.radius:g}: {worst:.6f} (gamma {req.cost.gamma:g})")
    print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_simulate(args) -> int:
    cfg, req = _design_request(args)
    x0, xr0 = cfg.initial_states()
    if args.no_control:
        k = np.zeros((req.agent.m, req.agent.n))
    else:
        k = load_certificate(args.gain).k
    t_final = args.t_final if args.t_final is not None else cfg.simulation.t_final
    dt = args.dt if args.dt is not None else cfg.simulation.dt
    traj = simulate(req.agent, req.network, k, x0, xr0, req.cost, t_final=t_final, dt=dt)
    if args.out:
        write_trajectory_csv(traj, args.out)

    terminal = float(traj.tracking_errors()[-1].max())
    reached = consensus_reached(traj, CONSENSUS_TOL)
    quad = float(traj.running_cost[-1])
    print(f"t_final = {traj.times[-1]:g} s, dt = {dt:g} s, samples = {traj.times.size}")
    print(f"terminal max tracking error: {terminal:.6e}")
    print(f"tracking consensus (tol {CONSENSUS_TOL:g}): {reached}")
    print(f"quadrature cost over horizon: {quad:.10g}")
    try:
        cl = build_closed_loop(req.agent, req.network, k, req.cost)
        oracle = exact_cost(cl, error_state(x0, xr0, req.agent.n))
        gap = abs(quad - oracle) / oracle if oracle > 0 else abs(quad - oracle)
        print(f"Lyapunov-oracle cost: {oracle:.10g}")
        print(f"relative gap: {gap:.3e}")
    except InfiniteCostError:
        print("Lyapunov-oracle cost: inf (closed loop not Hurwitz)")
    return EXIT_OK if reached else EXIT_FAILED


def cmd_reproduce(args) -> int:
    rep = reproduce(epsilon=args.epsilon, c=args.c, case_b_coefficient=args.case_b_coefficient)
    print(format_table(rep))
    if not rep.passed:
        if rep.offenders:
            print("mismatched: " + ", ".join(rep.offenders))
        return EXIT_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sublqt", description="Suboptimal distributed LQ tracking control for leader-follower networks."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    coeff_help = "case (b) Riccati coefficient variant (default: from config)"

    p = sub.add_parser("design", help="synthesize and certify a distributed gain")
    p.add_argument("config")
    p.add_argument("--out", help="write the certificate here instead of stdout")
    p.add_argument("--case-b-coefficient", choices=[c.value for c in CaseBCoefficient], help=coeff_help)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("verify", help="check a certificate against a problem")
    p.add_argument("config")
    p.add_argument("--gain", required=True, help="certificate document produced by 'design'")
    p.add_argument("--samples", type=int, default=100, help="random initial errors for the sampled cost check")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="simulate leader and followers, export CSV")
    p.add_argument("config")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gain", help="certificate document providing K")
    src.add_argument("--no-control", action="store_true", help="simulate with K = 0")
    p.add_argument("--t-final", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--out", help="CSV output path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reproduce-example", help="rerun the five-follower example and compare")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--case-b-coefficient", choices=[c.value for c in CaseBCoefficient], help=coeff_help)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DivergenceError as exc:
        print(f"error: simulation diverged at t = {exc.time:g} s", file=sys.stderr)
        return EXIT_NUMERICAL
    except (SublqtError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
