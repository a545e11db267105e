"""Batch command-line front end.

Exit codes: 0 success, 1 usage error, 2 propagation failure, 3 resource
exhaustion.
"""
from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from . import evolution, full_model_oracle as fmo, hubbard_effective as hub
from . import signal_channel, tail_bound_lp as tb
from .errors import FitFailure, InfeasibleProblem, InvalidArgument, PropagationFailure, ResourceExhausted
from .excitation_core import analytic_first_moment, analytic_second_moment
from .output import RunRecord, emit, version_string

EXIT_OK, EXIT_USAGE, EXIT_PROPAGATION, EXIT_RESOURCE = 0, 1, 2, 3
LEMMA_PENALTIES = (1.0, 10.0, 100.0, 1000.0, 10000.0)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _prop_config(args):
    return evolution.PropagationConfig(tol=args.tol)


def cmd_moments(args):
    if args.steps < 1:
        raise InvalidArgument("steps must be >= 1")
    cfg = _prop_config(args)
    rows = []
    for k in range(1, args.steps + 1):
        t = args.t_max * k / args.steps
        res = evolution.evolve_adaptive(t, cfg)
        rows.append({
            "t": t,
            "first_sim": evolution.measured_moment(res.final_state, 1),
            "first_analytic": analytic_first_moment(t),
            "second_sim": evolution.measured_moment(res.final_state, 2),
            "second_analytic": analytic_second_moment(t),
            "L_used": res.level_count_used,
            "tail_weight": res.tail_weight,
        })
    return {"moments": rows}


def cmd_bound(args):
    M = args.M
    cert = tb.paper_certificate(M)
    j_max = args.j_max if args.j_max is not None else min(10 * M * M, 10**7)
    j_max = max(j_max, M + 1)
    rep = tb.check_dual_feasibility(cert, j_max)
    row = {
        "M": M,
        "y1": cert.y1,
        "y2": cert.y2,
        "y3": cert.y3,
        "feasible": rep.feasible,
        "worst_slack": rep.worst_slack,
        "argmin": rep.argmin,
        "j_max": j_max,
        "g": tb.g(M),
        "t_star": math.log(M),
    }
    out = {"bound": [row]}
    if args.primal:
        sol = tb.solve_primal_truncated(tb.moments_at_log(M), M, args.L)
        out["primal"] = [{"j": j, "p": p} for j, p in sorted(sol.support.items())]
        row["primal_objective"] = sol.objective
    return out


def cmd_signal(args):
    m = args.m
    if m < 2:
        raise InvalidArgument("m must be >= 2")
    t = signal_channel.auto_time(m) if args.t == "auto" else float(args.t)
    rep = signal_channel.signal_report(m, t, _prop_config(args))
    return {"signal": [rep.as_dict()]}


def cmd_oracle(args):
    cfg = fmo.FullModelConfig(args.n, args.K)
    cfg.check_cap()
    rep = fmo.run_oracle(cfg, args.t)
    if args.export:
        fmo.export_coo(fmo.build_full_hamiltonian(cfg), args.export)
    return {"oracle": [rep.as_dict()]}


def cmd_hubbard(args):
    J = float(args.N + 1)
    profile, peaks = [], []
    for n in args.n:
        if args.t_max is None:
            times = hub.default_grid(n, J, args.steps)
        else:
            times = np.linspace(0.0, args.t_max, args.steps + 1)
        prof = hub.arrival_profile(hub.UniformChainConfig(n, args.N, tuple(times)))
        profile.extend({"n": n, "J": J, "t": float(t), "probability": float(p)}
                       for t, p in zip(prof.times, prof.probability))
        peaks.append({"n": n, "J": J, "peak_time": prof.peak_time, "peak_value": prof.peak_value})
    out = {"profile": profile, "peaks": peaks}
    if len(set(args.n)) >= 3:
        fit = hub.velocity_fit(args.n, J, args.steps)
        out["fit"] = [{"J": fit.J, "speed": fit.speed, "speed_over_2J": fit.speed / (2 * J),
                       "intercept": fit.intercept, "decay_exponent": fit.decay_exponent}]
    return out


def cmd_lemma(args):
    if args.dA < 1 or args.dC < 1:
        raise InvalidArgument("dA and dC must be >= 1")
    A, B, C = hub.random_lemma_blocks(args.dA, args.dC, args.seed, args.zero_coupling)
    rows = [{"x": x, "gap": hub.lemma_gap(hub.LemmaInstance(A, B, C, x, args.t))}
            for x in LEMMA_PENALTIES]
    return {"lemma": rows}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--tol", type=float, default=evolution.DEFAULT_TOL)
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="supersonic", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("moments", parents=[common], allow_abbrev=False,
                       help="simulated vs closed-form moments")
    s.add_argument("--t_max", type=float, required=True)
    s.add_argument("--steps", type=int, default=8)
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("bound", parents=[common], allow_abbrev=False,
                       help="dual certificate and g(M)")
    s.add_argument("--M", type=int, required=True)
    s.add_argument("--j_max", type=int, default=None)
    s.add_argument("--primal", action="store_true", help="also solve the truncated primal LP")
    s.add_argument("--L", type=int, default=None, help="primal support size (default 20 M^2)")
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("signal", parents=[common], allow_abbrev=False,
                       help="hitting probability and channel capacity")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--t", default="auto", help="time, or 'auto' for log(2m-2)")
    s.set_defaults(func=cmd_signal)

    s = sub.add_parser("oracle", parents=[common], allow_abbrev=False,
                       help="full spin-1 model vs effective Hamiltonian")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--K", type=int, required=True)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--export", default=None, help="write H in coordinate text format")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("hubbard", parents=[common], allow_abbrev=False,
                       help="uniform hopping arrival profile and velocity fit")
    s.add_argument("--n", type=int, nargs="+", required=True)
    s.add_argument("--N", type=int, default=0)
    s.add_argument("--t_max", type=float, default=None, help="default: n/(N+1) per chain")
    s.add_argument("--steps", type=int, default=2000)
    s.set_defaults(func=cmd_hubbard)

    s = sub.add_parser("lemma", parents=[common], allow_abbrev=False,
                       help="block exponential gap vs penalty")
    s.add_argument("--dA", type=int, default=3)
    s.add_argument("--dC", type=int, default=3)
    s.add_argument("--t", type=float, default=1.0)
    s.add_argument("--zero_coupling", action="store_true", help="force B = 0")
    s.set_defaults(func=cmd_lemma)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k not in ("func",)}
    start = time.perf_counter()
    try:
        payload = args.func(args)
    except (InvalidArgument, InfeasibleProblem, FitFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PropagationFailure as exc:
        print(f"propagation failure: {exc} {exc.diagnostics}", file=sys.stderr)
        return EXIT_PROPAGATION
    except ResourceExhausted as exc:
        print(f"resource exhausted: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    rec = RunRecord(args.command, params, version_string(), time.perf_counter() - start, payload)
    text = emit(rec, args.format, args.out)
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
