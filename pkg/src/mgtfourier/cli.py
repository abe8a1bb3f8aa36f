"""Command-line front end: scans, simulations, certificates, reports.

Commands: classify, threshold, decay, simulate, certify, asymptotics,
oscillator.  Defaults reproduce the reference configuration alpha=2,
beta=1, gamma=3, lambda1=1 with a single mode, so bare commands emit the
standard comparison data.

Exit codes: 0 success (including flagged blow-up), 1 bad arguments,
2 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from . import __version__
from .asymptotics import (
    eta_limit_probe,
    kappa_limit_constants,
    kappa_limit_probe,
    omega_kappa_scan,
    subcritical_value,
)
from .charpoly import decay_rate_mode, decay_rate_spectrum, spectral_abscissa, tau_star
from .energy import certified_rate, lyapunov_matrix_margin
from .errors import NumericalFailure, UnfitWindow
from .oscillator import (
    osc_admissible,
    osc_identity_residual,
    osc_optimize,
    osc_true_rate,
    simulate_osc,
)
from .params import (
    SystemParams,
    classify_regime,
    proof_constants,
    stability_predicate,
    theoretical_threshold,
    theoretical_threshold_1d,
)
from .simulate import SpectrumSpec, Trajectory, measured_rate, simulate_superposition
from .simulate import energy_identity_residual

EXIT_OK = 0
EXIT_BAD_ARGS = 1
EXIT_NUMERICAL = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_BAD_ARGS, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _params_from(args) -> SystemParams:
    return SystemParams(
        alpha=args.alpha,
        beta=args.beta,
        gamma=args.gamma,
        kappa=args.kappa,
        eta=args.eta,
        lambda1=args.lambda1,
    )


def _grid_from(args) -> list:
    if args.grid_steps < 1:
        raise ValueError("--grid-steps must be >= 1")
    if args.grid_scale == "log":
        if args.grid_min <= 0:
            raise ValueError("--grid-min must be positive on a log grid")
        return list(np.geomspace(args.grid_min, args.grid_max, args.grid_steps))
    return list(np.linspace(args.grid_min, args.grid_max, args.grid_steps))


def _open_out(args):
    if args.out is None or args.out == "-":
        return sys.stdout, False
    return open(args.out, "w"), True


def _csv_header(out, args, columns):
    out.write(f"# mgtfourier {__version__}\n")
    flags = " ".join(
        f"--{k.replace('_', '-')} {v}" for k, v in sorted(vars(args).items())
        if k not in ("func",) and v is not None
    )
    out.write(f"# flags: {flags}\n")
    out.write(f"# columns: {','.join(columns)}\n")
    out.write(",".join(columns) + "\n")


def _pmap(fn, items, workers):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def cmd_classify(args) -> int:
    p = _params_from(args)
    tau = theoretical_threshold(p)
    abscissa = spectral_abscissa(p, p.lambda1)
    stable = stability_predicate(p)
    print(f"regime: {classify_regime(p).value}")
    print(f"mu: {_fmt(p.mu)}")
    print(f"stability_number: {_fmt(p.stability_number)}")
    print(f"tau: {_fmt(tau)}")
    print(f"stability_predicate: {'stable' if stable else 'not guaranteed'}")
    print(f"spectral_abscissa_lambda1: {_fmt(abscissa)}")
    print(f"verdict: {'stable' if abscissa < 0 else 'unstable'}")
    if classify_regime(p).value == "subcritical":
        print("note: subcritical regime; stability holds for every coupling")
    return EXIT_OK


def _threshold_row(job):
    p, kappa = job
    pk = replace(p, kappa=kappa)
    try:
        tau = theoretical_threshold(pk)
        tau1 = theoretical_threshold_1d(pk)
        ts = tau_star(pk, pk.lambda1)
        ratio = tau / ts if ts > 0 else math.inf
        return (kappa, tau, tau1, ts, ratio, True)
    except NumericalFailure:
        nan = float("nan")
        return (kappa, nan, nan, nan, nan, False)


def cmd_threshold(args) -> int:
    p = _params_from(args)
    grid = _grid_from(args)
    rows = _pmap(_threshold_row, [(p, k) for k in grid], args.workers)
    out, close = _open_out(args)
    try:
        columns = ["kappa", "tau_theoretical", "tau_theoretical_1d", "tau_star", "ratio"]
        _csv_header(out, args, columns)
        failures = 0
        for row in rows:
            *values, ok = row
            if not ok:
                failures += 1
                out.write("# numerical failure at kappa=" + _fmt(row[0]) + "\n")
            out.write(",".join(_fmt(v) for v in values) + "\n")
        if failures:
            out.write(f"# failed rows: {failures}\n")
    finally:
        if close:
            out.close()
    if len(rows) and failures > 0.01 * len(rows):
        return EXIT_NUMERICAL
    return EXIT_OK


def _decay_row(job):
    p, eta, modes = job
    pe = replace(p, eta=eta)
    spectrum = SpectrumSpec.dirichlet(pe.lambda1, modes).lambdas
    try:
        omega_star = decay_rate_spectrum(pe, spectrum).rate
        cert = certified_rate(pe, spectrum)
        omega_b_val = cert.omega if cert.valid else float("nan")
        return (eta, omega_star, omega_b_val, cert.valid, True)
    except NumericalFailure:
        nan = float("nan")
        return (eta, nan, nan, False, False)


def cmd_decay(args) -> int:
    p = _params_from(args)
    grid = _grid_from(args)
    rows = _pmap(_decay_row, [(p, e, args.modes) for e in grid], args.workers)
    out, close = _open_out(args)
    try:
        columns = ["eta", "omega_star", "omega_b", "cert_valid"]
        _csv_header(out, args, columns)
        failures = 0
        for row in rows:
            *values, ok = row
            if not ok:
                failures += 1
                out.write("# numerical failure at eta=" + _fmt(row[0]) + "\n")
            out.write(",".join(_fmt(v) for v in values) + "\n")
        if failures:
            out.write(f"# failed rows: {failures}\n")
    finally:
        if close:
            out.close()
    if len(rows) and failures > 0.01 * len(rows):
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_simulate(args) -> int:
    p = _params_from(args)
    spec = SpectrumSpec.dirichlet(p.lambda1, args.modes)
    lam_max = max(spec.lambdas)
    dt_cap = 0.1 / (p.kappa * lam_max + p.eta**2 * lam_max + 1.0)
    if args.dt > dt_cap:
        sys.stderr.write(
            f"error: dt={args.dt} exceeds the stability bound {dt_cap:.3e} "
            f"for the stiffest requested mode; reduce --dt\n"
        )
        return EXIT_BAD_ARGS
    x0 = [args.u0, args.v0, args.w0, args.theta0]
    trajectories, total_energy = simulate_superposition(
        p, spec, [x0] * args.modes, args.t_end, args.dt
    )
    n = len(total_energy)
    total_quasi = np.sum([t.quasienergy[:n] for t in trajectories], axis=0)
    times = trajectories[0].times[:n]
    blew_up = any(t.blew_up for t in trajectories)

    out, close = _open_out(args)
    try:
        columns = ["t"]
        for k in range(1, args.modes + 1):
            columns += [f"mode{k}_u", f"mode{k}_v", f"mode{k}_w", f"mode{k}_theta"]
        columns += ["E_total", "W_total"]
        _csv_header(out, args, columns)
        for i in range(n):
            values = [times[i]]
            for t in trajectories:
                values.extend(t.states[i])
            values += [total_energy[i], total_quasi[i]]
            out.write(",".join(_fmt(v) for v in values) + "\n")
        if blew_up:
            out.write(f"# blow-up: trajectory truncated at t={_fmt(times[-1])}\n")
        residual = max(energy_identity_residual(t, p) for t in trajectories)
        out.write(f"# energy_identity_residual: {_fmt(residual)}\n")
        try:
            aggregate = Trajectory(
                lam=p.lambda1,
                times=times,
                states=trajectories[0].states[:n],
                energy=total_energy,
                quasienergy=total_quasi,
                blew_up=blew_up,
            )
            out.write(f"# measured_rate: {_fmt(measured_rate(aggregate))}\n")
        except UnfitWindow as exc:
            out.write(f"# measured_rate: unavailable ({exc})\n")
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_certify(args) -> int:
    p = _params_from(args)
    spectrum = SpectrumSpec.dirichlet(p.lambda1, args.modes).lambdas
    cert = certified_rate(p, spectrum)
    pc = proof_constants(p)
    print(f"valid: {_fmt(cert.valid)}")
    print(f"rho: {_fmt(cert.rho)}")
    print(f"sigma: {_fmt(cert.sigma)}")
    print(f"ell: {_fmt(cert.ell)}")
    print(f"epsilon: {_fmt(cert.epsilon)}")
    print(f"omega: {_fmt(cert.omega)}")
    print(f"c: {_fmt(cert.c)}")
    print(f"omega_cert: {_fmt(cert.omega_cert)}")
    for reason in cert.reasons:
        print(f"reason: {reason}")
    if cert.valid:
        for lam in spectrum:
            margin = lyapunov_matrix_margin(p, lam, pc.rho, cert.epsilon, cert.omega)
            print(f"lyapunov_margin_lambda_{_fmt(lam)}: {_fmt(margin)}")
    return EXIT_OK


def cmd_asymptotics(args) -> int:
    p = _params_from(args)
    lam = p.lambda1
    checks = []

    probe = eta_limit_probe(replace(p, eta=1e4), lam)
    checks.append(("eta_probe_p_value_near_-1", abs(probe.p_value + 1.0) < 0.05, probe.p_value))

    rate = decay_rate_mode(replace(p, eta=1e3), lam)
    checks.append(("decay_rate_vanishes_large_eta", 0 <= rate.rate < 0.01, rate.rate))

    if p.mu >= 0:
        for eta in (1.0, 10.0):
            kp = kappa_limit_probe(replace(p, eta=eta), lam, 1e6)
            checks.append(
                (f"kappa_probe_negative_eta_{_fmt(eta)}", kp.p_value < 0, kp.p_value)
            )
        xi = kappa_limit_constants(p, lam).xi
        for kappa in (1e3, 1e4, 1e5):
            ok = omega_kappa_scan(p, kappa, lam=lam)
            checks.append(
                (f"omega_kappa_bounded_kappa_{_fmt(kappa)}", ok.omega <= 2.0 * xi + 1e-6, ok.omega)
            )
    if p.mu < 0:
        value = subcritical_value(p, lam)
        checks.append(("subcritical_identity", True, value))

    failed = False
    for name, ok, value in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {_fmt(value)}")
        failed = failed or not ok
    return EXIT_NUMERICAL if failed else EXIT_OK


def cmd_oscillator(args) -> int:
    try:
        omega_star = osc_true_rate()
        eps_opt, omega_b_val = osc_optimize()
        traj = simulate_osc(1.0, 0.0, 20.0, 1e-3)
        residual = osc_identity_residual(traj, eps_opt)
    except NumericalFailure as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    checks = [
        ("omega_star", omega_star, abs(omega_star - 1.0) < 1e-10),
        ("eps_opt", eps_opt, abs(eps_opt - 0.5) < 1e-6),
        ("omega_b", omega_b_val, abs(omega_b_val - (1.0 - math.sqrt(5.0) / 5.0)) < 1e-9),
        ("gap", omega_star - omega_b_val, omega_b_val < omega_star),
        ("identity_residual", residual, residual < 1e-8),
        ("optimum_admissible", 1.0, osc_admissible(eps_opt, omega_b_val - 1e-12)),
    ]
    failed = False
    for name, value, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {_fmt(value)}")
        failed = failed or not ok
    return EXIT_NUMERICAL if failed else EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="mgtstab", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--alpha", type=float, default=2.0)
    params.add_argument("--beta", type=float, default=1.0)
    params.add_argument("--gamma", type=float, default=3.0)
    params.add_argument("--kappa", type=float, default=2.0)
    params.add_argument("--eta", type=float, default=3.0)
    params.add_argument("--lambda1", type=float, default=1.0)
    params.add_argument("--modes", type=int, default=1)
    params.add_argument("--out", type=str, default=None)
    params.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--grid-min", type=float, default=0.1)
    grid.add_argument("--grid-max", type=float, default=10.0)
    grid.add_argument("--grid-steps", type=int, default=100)
    grid.add_argument("--grid-scale", choices=("lin", "log"), default="log")

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--dt", type=float, default=1e-3)
    sim.add_argument("--t-end", type=float, default=10.0)
    sim.add_argument("--u0", type=float, default=1.0)
    sim.add_argument("--v0", type=float, default=0.0)
    sim.add_argument("--w0", type=float, default=0.0)
    sim.add_argument("--theta0", type=float, default=0.0)

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[params]).set_defaults(func=cmd_classify)
    sub.add_parser("threshold", parents=[params, grid]).set_defaults(func=cmd_threshold)
    sub.add_parser("decay", parents=[params, grid]).set_defaults(func=cmd_decay)
    sub.add_parser("simulate", parents=[params, sim]).set_defaults(func=cmd_simulate)
    sub.add_parser("certify", parents=[params]).set_defaults(func=cmd_certify)
    sub.add_parser("asymptotics", parents=[params]).set_defaults(func=cmd_asymptotics)
    sub.add_parser("oscillator", parents=[params]).set_defaults(func=cmd_oscillator)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_ARGS
    except NumericalFailure as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
