"""
🔭 Zoom subcommands: segment, verify, schedule

All three build the requested segment the same way. A parameter given on the
command line is used as-is; anything left out is chosen the way the plan
chooses it (single wall, chamber representatives, doubling searches).
"""

import argparse
import logging

from errors import InputError
from exact import rat_str
from segments import (
    EtaSegment,
    SigmaSegment,
    ZetaSegment,
    default_flanks,
    eta_u_coefficients,
    make_eta,
    make_sigma,
    make_zeta,
    search_a,
    search_b,
)
from stability import StabilitySegment, SubsheafFamily, equivalent_at, is_open, is_uniform
from stability.predicates import MODES
from walls import representative, segment_walls
from plan import flip_schedule

from . import EXIT_OK, add_problem_arg, exit_status, out, rational_arg
from .formats import Problem, load_problem

logger = logging.getLogger("zoomwall.cli.zoom")

LEVELS = ("sigma", "eta", "zeta")


# ── Building the requested segment ──

def _only_wall(values, name: str, level: str):
    if len(values) == 1:
        return values[0]
    found = ", ".join(rat_str(v) for v in values) or "none"
    raise InputError(f"{level} has walls [{found}]; pick one with --{name}", {"walls": found})


def _pair(a, b, names: str):
    if (a is None) != (b is None):
        raise InputError(f"Give both {names} or neither")
    return a, b


def _sigma(problem: Problem, args) -> SigmaSegment:
    request = problem.spec.plan
    names = (
        args.L0 or (request.L0 if request else "L0"),
        args.L1 or (request.L1 if request else "L1"),
    )
    return make_sigma(problem.bundle(names[0]), problem.bundle(names[1]), names)


def _eta(sigma: SigmaSegment, fam: SubsheafFamily, args) -> EtaSegment:
    t_bar = args.t_bar
    if t_bar is None:
        t_bar = _only_wall(segment_walls(sigma.segment, fam).values, "t-bar", "σ")
    t0, t1 = _pair(args.t0, args.t1, "--t0/--t1")
    if t0 is None:
        t0, t1, _ = default_flanks(sigma, t_bar, fam)
    if args.a is not None:
        return make_eta(sigma, t_bar, t0, t1, args.a, fam)
    return search_a(sigma, t_bar, t0, t1, fam).result


def _zeta(eta: EtaSegment, fam: SubsheafFamily, args) -> ZetaSegment:
    chambers = segment_walls(eta.segment, fam)
    s_bar = args.s_bar
    if s_bar is None:
        s_bar = _only_wall(chambers.values, "s-bar", "η")
    s0, s1 = _pair(args.s0, args.s1, "--s0/--s1")
    if s0 is None:
        if s_bar not in chambers.values:
            raise InputError(f"s̄ = {s_bar} is not an η-wall; give --s0 and --s1", {"s_bar": str(s_bar)})
        left, right = chambers.neighbours(s_bar)
        s0, s1 = representative(*left).value, representative(*right).value
    if args.b is not None:
        return make_zeta(eta, s_bar, s0, s1, args.lam, args.b)
    return search_b(eta, s_bar, s0, s1, fam, args.lam).result


def build_segment(problem: Problem, args, level: str):
    """Returns the σ, η or ζ object for `level`."""
    fam = problem.require_family()
    built = _sigma(problem, args)
    if level in ("eta", "zeta"):
        built = _eta(built, fam, args)
    if level == "zeta":
        built = _zeta(built, fam, args)
    return built


def add_segment_args(parser: argparse.ArgumentParser):
    add_problem_arg(parser)
    parser.add_argument("--L0", help="bundle name for L₀")
    parser.add_argument("--L1", help="bundle name for L₁")
    parser.add_argument("--t-bar", dest="t_bar", type=rational_arg, help="σ-wall to zoom into")
    parser.add_argument("--t0", type=rational_arg, help="left σ flank")
    parser.add_argument("--t1", type=rational_arg, help="right σ flank")
    parser.add_argument("--a", type=int, help="η exponent scale (skips the search)")
    parser.add_argument("--s-bar", dest="s_bar", type=rational_arg, help="η-wall to zoom into")
    parser.add_argument("--s0", type=rational_arg, help="left η flank")
    parser.add_argument("--s1", type=rational_arg, help="right η flank")
    parser.add_argument("--lambda", dest="lam", type=rational_arg, help="ζ λ (default λ_min + 1)")
    parser.add_argument("--b", type=rational_arg, help="ζ scale b (skips the search)")


# ── segment ──

def _print_pairs(seg: StabilitySegment):
    for p in seg.pairs:
        out(f"  {p.label}: {p.B.describe()}")


def _print_sigma(sigma: SigmaSegment):
    out(f"sigma0(t) = {sigma.coefficients[0]}")
    out(f"sigma1(t) = {sigma.coefficients[1]}")
    if sigma.generic is not None:
        out(f"generic (c0k != c1k): {'yes' if sigma.generic else 'no'}")


def _print_eta(eta: EtaSegment, fam: SubsheafFamily):
    out(f"t_bar = {rat_str(eta.t_bar)}  t0 = {rat_str(eta.t0)}  t1 = {rat_str(eta.t1)}  a = {eta.a}")
    for (j, i), e in sorted(eta.exponents.items()):
        out(f"  e{j}{i} = {e}")
    if eta.model.dim == 3:
        for F in fam.usable():
            u = eta_u_coefficients(eta, F, fam.ambient)
            out(f"  {F.name}: u1 = {u.u1}  u2 = {u.u2}  u3 = {u.u3}  eps = {u.epsilon}")


def _print_zeta(zeta: ZetaSegment):
    solution = zeta.solution
    out(f"s_bar = {rat_str(zeta.s_bar)}  s0 = {rat_str(zeta.s0)}  s1 = {rat_str(zeta.s1)}  "
        f"r_tilde = {rat_str(zeta.r_tilde)}")
    out(f"lambda = {rat_str(zeta.lam)}  lambda_min = {rat_str(solution.lambda_min)}  b = {rat_str(zeta.b)}")
    for k in (0, 1):
        alphas = "  ".join(rat_str(a) for a in solution.ordered(k))
        out(f"  alpha k={k}: {alphas}")


def cmd_segment(args) -> int:
    problem = load_problem(args.problem)
    fam = problem.require_family()
    built = build_segment(problem, args, args.level)
    seg = built.segment

    out(f"segment {seg.label} in {seg.variable}")
    if isinstance(built, SigmaSegment):
        _print_sigma(built)
    elif isinstance(built, EtaSegment):
        _print_eta(built, fam)
    else:
        _print_zeta(built)
    _print_pairs(seg)
    for mode in MODES:
        out(str(is_uniform(seg, mode)))
    out(str(is_open(seg, fam)))
    walls = segment_walls(seg, fam).values
    out(f"walls: {', '.join(rat_str(v) for v in walls) or 'none'}")
    return EXIT_OK


# ── verify ──

def cmd_verify(args) -> int:
    problem = load_problem(args.problem)
    fam = problem.require_family()
    seg = build_segment(problem, args, args.segment).segment

    if args.check == "uniform":
        report = is_uniform(seg, args.mode)
        out(str(report))
        return exit_status(report.uniform)
    if args.check == "open":
        report = is_open(seg, fam)
        out(str(report))
        return exit_status(report.open)

    if not args.at:
        raise InputError("verify equiv needs --at V1 V2")
    v1, v2 = args.at
    report = equivalent_at(seg, fam, v1, v2)
    out(f"{seg.label}({rat_str(v1)}) vs {seg.label}({rat_str(v2)}): {report}")
    return exit_status(report.equivalent)


# ── schedule ──

def cmd_schedule(args) -> int:
    problem = load_problem(args.problem)
    fam = problem.require_family()
    seg = build_segment(problem, args, args.segment).segment
    schedule = flip_schedule(seg, fam, args.start, args.end)
    out(f"schedule for {schedule.segment}")
    out(f"anchors: {', '.join(rat_str(v) for v in schedule.anchors)}")
    out(f"intermediates: {', '.join(rat_str(v) for v in schedule.intermediates)}")
    for line in schedule.describe():
        out(f"  {line}")
    return EXIT_OK


def register(subparsers):
    p = subparsers.add_parser("segment", help="build a σ, η or ζ segment and describe it")
    p.add_argument("level", choices=LEVELS)
    add_segment_args(p)
    p.set_defaults(func=cmd_segment)

    p = subparsers.add_parser("verify", help="check uniformity, openness or equivalence on a segment")
    p.add_argument("check", choices=("uniform", "open", "equiv"))
    p.add_argument("--segment", choices=LEVELS, default="sigma")
    p.add_argument("--mode", choices=MODES, default="difference", help="uniformity mode")
    p.add_argument("--at", nargs=2, type=rational_arg, metavar=("V1", "V2"), help="parameter values for equiv")
    add_segment_args(p)
    p.set_defaults(func=cmd_verify)

    p = subparsers.add_parser("schedule", help="flip schedule of a uniform segment")
    p.add_argument("--segment", choices=LEVELS, default="sigma")
    p.add_argument("--from", dest="start", type=rational_arg, required=True, help="t′")
    p.add_argument("--to", dest="end", type=rational_arg, required=True, help="t″")
    add_segment_args(p)
    p.set_defaults(func=cmd_schedule)
