"""
📋 Reports: validate, chi, walls, chambers

Read-only subcommands. Each prints a plain-text report; none of them
writes files.
"""

import argparse
import logging

from chow import GradedClass
from errors import InputError
from exact import rat_str
from segments import make_sigma
from sheaves import euler_characteristic
from stability import semistable, slope
from walls import classify_separation, is_general, wall_function, walls_on_ample_line, segment_walls

from . import EXIT_OK, add_problem_arg, exit_status, out, rational_arg
from .formats import Problem, load_problem, parse_divisor, parse_sheaf, resolve_model

logger = logging.getLogger("zoomwall.cli.reports")


def _line_bundles(problem: Problem, args) -> tuple[GradedClass, GradedClass, tuple[str, str]]:
    """The L₀/L₁ pair named on the command line, else the plan request, else "L0"/"L1"."""
    request = problem.spec.plan
    names = (
        args.L0 or (request.L0 if request else "L0"),
        args.L1 or (request.L1 if request else "L1"),
    )
    return problem.bundle(names[0]), problem.bundle(names[1]), names


def _add_line_args(parser: argparse.ArgumentParser):
    parser.add_argument("--L0", help="bundle name for L₀ (default: plan.L0 or 'L0')")
    parser.add_argument("--L1", help="bundle name for L₁ (default: plan.L1 or 'L1')")


# ── validate ──

def cmd_validate(args) -> int:
    target = args.target
    if target.endswith(".prob"):
        problem = load_problem(target)
        report = problem.model.validate()
        out(report.summary())
        if report.ok:
            family = problem.family
            members = ", ".join(family.names) if family else "none"
            out(f"problem valid: {len(problem.sheaves)} sheaf type(s), {len(problem.bundles)} bundle(s), "
                f"family members: {members}")
        return exit_status(report.ok)

    model = resolve_model(target, validate=False)
    report = model.validate()
    out(report.summary())
    return exit_status(report.ok)


# ── chi ──

def cmd_chi(args) -> int:
    problem = load_problem(args.problem) if args.problem else None
    if problem is not None:
        model = problem.model
        bundles, sheaves = problem.bundles, problem.sheaves
    elif args.model:
        model = resolve_model(args.model)
        bundles, sheaves = {}, {}
    else:
        raise InputError("chi needs --model or --problem")

    E = parse_sheaf(model, "E", args.sheaf, sheaves, bundles)
    L = parse_divisor(model, args.L, bundles)
    chi = euler_characteristic(E, L)
    if args.k is None:
        out(f"chi({args.sheaf} (x) L^k) = {chi.as_expr()}")
    else:
        out(rat_str(chi.eval(args.k)))
    return EXIT_OK


# ── walls ──

def cmd_walls(args) -> int:
    problem = load_problem(args.problem)
    fam = problem.require_family()
    tau = fam.ambient
    L0, L1, names = _line_bundles(problem, args)
    d = problem.model.dim

    out(f"walls of {tau.name} on the line {names[0]} -> {names[1]}")
    for F in fam.usable():
        for i in range(1, d):
            wall = wall_function(F, tau, i)
            roots = walls_on_ample_line(F, tau, L0, L1, i)
            found = [
                rat_str(r) + (f" (x{m})" if m > 1 else "")
                for r, m in zip(roots.exact_roots, roots.exact_multiplicities)
            ]
            found += [
                f"({rat_str(lo)}, {rat_str(hi)})" + (f" (x{m})" if m > 1 else "")
                for (lo, hi), m in zip(roots.irrational_root_intervals, roots.interval_multiplicities)
            ]
            out(f"  {F.name} i={i}: {wall.kind.value}  beta = {wall.form}")
            out(f"    beta({names[0]}) = {rat_str(wall.at(L0))}  beta({names[1]}) = {rat_str(wall.at(L1))}")
            out(f"    roots on line: {', '.join(found) if found else 'none'}")

    for name, L in zip(names, (L0, L1)):
        out(f"{name} general: {is_general(L, fam, tau)}")
    out(f"separation: {classify_separation(fam, tau, L0, L1)}")
    return EXIT_OK


# ── chambers ──

def cmd_chambers(args) -> int:
    problem = load_problem(args.problem)
    fam = problem.require_family()
    tau = fam.ambient
    L0, L1, names = _line_bundles(problem, args)
    sigma = make_sigma(L0, L1, names)
    seg = sigma.segment

    decomposition = segment_walls(seg, fam)
    out(f"chambers of {seg.label}")
    out(f"walls: {', '.join(rat_str(v) for v in decomposition.values) or 'none'}")
    for wall in decomposition.walls:
        tags = ", ".join(f"{name}/{i}" for name, i in wall.tags)
        out(f"  t = {rat_str(wall.value)}: {tags}")

    for (lo, hi), t in zip(decomposition.chambers, decomposition.representatives):
        verdict = semistable(tau, fam, seg, t)
        out(f"({rat_str(lo)}, {rat_str(hi)}) at t = {rat_str(t)}: {verdict}")
        mu_tau = slope(tau, seg, t)
        for F in fam.usable():
            mu = slope(F, seg, t)
            flag = "  slope-destabilizing" if mu > mu_tau else ""
            out(f"    {F.name}: sign {verdict.signs[F.name]:+d}  mu = {rat_str(mu)} vs {rat_str(mu_tau)}{flag}")
    return EXIT_OK


def register(subparsers):
    p = subparsers.add_parser("validate", help="check a .model or .prob file")
    p.add_argument("target", help="built-in model name, .model path or .prob path")
    p.set_defaults(func=cmd_validate)

    p = subparsers.add_parser("chi", help="Euler characteristic χ(E ⊗ L^k)")
    p.add_argument("--model", "-m", help="built-in model name or .model path")
    add_problem_arg(p, required=False)
    p.add_argument("--sheaf", default="O", help="'O', 'O(a,b,...)' or a sheaf named in the problem")
    p.add_argument("--L", required=True, help="divisor 'O(a,b,...)' or a bundle named in the problem")
    p.add_argument("--k", type=rational_arg, help="evaluate at this k instead of printing the polynomial")
    p.set_defaults(func=cmd_chi)

    p = subparsers.add_parser("walls", help="wall functions, roots on the ample line and separation")
    add_problem_arg(p)
    _add_line_args(p)
    p.set_defaults(func=cmd_walls)

    p = subparsers.add_parser("chambers", help="σ-segment chambers with verdicts and slope flags")
    add_problem_arg(p)
    _add_line_args(p)
    p.set_defaults(func=cmd_chambers)
