"""
🗺️ Plan subcommands: plan, surface-plan, replan

plan and surface-plan write a PlanDocument (JSON, rationals as "p/q") that
embeds the problem it came from. replan --verify rebuilds the tree from that
embedded problem and the stored parameters, without searching, and compares
the ledger byte for byte.
"""

import logging
from typing import Optional

from errors import InputError
from plan import PlanDocument, build_plan, overrides_from_document, surface_document, surface_plan, to_document

from . import EXIT_CHECK_FAILED, add_problem_arg, exit_status, out
from .formats import Problem, load_plan, load_problem, problem_from_dict

logger = logging.getLogger("zoomwall.cli.plans")


def _write(doc: PlanDocument, path: Optional[str]):
    if not path:
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(doc.dumps())
    logger.info(f"💾 Plan written to {path}")


def _print_ledger_failures(doc: PlanDocument):
    for entry in doc.ledger:
        if entry.required and not entry.passed:
            out(f"  FAILED {entry.check} on {entry.subject}: {entry.detail}")


# ── Building ──

def _variation(problem: Problem, L0_name: Optional[str] = None, L1_name: Optional[str] = None,
               overrides: Optional[dict] = None) -> PlanDocument:
    fam = problem.require_family()
    request = problem.spec.plan
    names = (
        L0_name or (request.L0 if request else "L0"),
        L1_name or (request.L1 if request else "L1"),
    )
    built = build_plan(problem.bundle(names[0]), problem.bundle(names[1]), fam, names, overrides)
    raw = {**problem.raw, "plan": {"L0": names[0], "L1": names[1]}}
    return to_document(built, raw)


def _surface(problem: Problem, a: Optional[int] = None) -> PlanDocument:
    fam = problem.require_family()
    request = problem.spec.surface
    if request is None and a is None:
        raise InputError(f"{problem.source} has no 'surface' section; give --a")
    names = (request.L0, request.L1, request.Lbar) if request else ("L0", "L1", "Lbar")
    a = a if a is not None else request.a
    L0, L1, Lbar = (problem.bundle(name) for name in names)
    built = surface_plan(L0, L1, Lbar, fam, a, names)
    raw = {**problem.raw, "surface": {"L0": names[0], "L1": names[1], "Lbar": names[2], "a": a}}
    return surface_document(built, L0, L1, Lbar, raw)


def _summary(doc: PlanDocument):
    if doc.kind == "surface":
        surface = doc.surface
        out(f"surface segment, a = {surface.a}: walls {', '.join(surface.walls) or 'none'}")
        if surface.schedule:
            for line in surface.schedule.flips:
                out(f"  {line}")
        return

    sigma = doc.sigma
    out(f"sigma: walls {', '.join(sigma.walls) or 'none'}  separation {sigma.separation}")
    for eta in doc.etas:
        tries = f", {eta.tries} tr{'y' if eta.tries == 1 else 'ies'}" if eta.tries else ""
        out(f"  eta at t_bar = {eta.t_bar}: a = {eta.a}{tries}; walls {', '.join(eta.walls) or 'none'}")
        for zeta in eta.zetas:
            out(f"    zeta at s_bar = {zeta.s_bar}: lambda = {zeta.lam}, b = {zeta.b}; "
                f"walls {', '.join(zeta.walls) or 'none'}")
            if zeta.schedule:
                for line in zeta.schedule.flips:
                    out(f"      {line}")


# ── Commands ──

def cmd_plan(args) -> int:
    problem = load_problem(args.problem)
    doc = _variation(problem, args.L0, args.L1)
    _write(doc, args.out)
    _summary(doc)
    _print_ledger_failures(doc)
    out(doc.status)
    return exit_status(doc.complete)


def cmd_surface_plan(args) -> int:
    problem = load_problem(args.problem)
    doc = _surface(problem, args.a)
    _write(doc, args.out)
    _summary(doc)
    _print_ledger_failures(doc)
    out(doc.status)
    return exit_status(doc.complete)


def cmd_replan(args) -> int:
    stored = load_plan(args.verify)
    problem = problem_from_dict(stored.problem, f"{args.verify}:problem")
    if stored.kind == "surface":
        rebuilt = _surface(problem)
    else:
        rebuilt = _variation(problem, overrides=overrides_from_document(stored))
    _write(rebuilt, args.out)

    before = [entry.model_dump_json() for entry in stored.ledger]
    after = [entry.model_dump_json() for entry in rebuilt.ledger]
    identical = before == after
    if identical:
        out(f"ledger identical ({len(after)} entries)")
    else:
        first = next(
            (n for n, (x, y) in enumerate(zip(before, after)) if x != y),
            min(len(before), len(after)),
        )
        out(f"ledger differs at entry {first} ({len(before)} stored, {len(after)} rebuilt)")
        logger.warning(f"⚠️ Replan of {args.verify} does not reproduce the stored ledger")
    _print_ledger_failures(rebuilt)
    out(rebuilt.status)
    if not identical:
        return EXIT_CHECK_FAILED
    return exit_status(rebuilt.complete)


def register(subparsers):
    p = subparsers.add_parser("plan", help="run the σ → η → ζ zoom and write a plan document")
    add_problem_arg(p)
    p.add_argument("--L0", help="bundle name for L₀")
    p.add_argument("--L1", help="bundle name for L₁")
    p.add_argument("--out", "-o", help="plan document path (JSON)")
    p.set_defaults(func=cmd_plan)

    p = subparsers.add_parser("surface-plan", help="single uniform segment on a surface")
    add_problem_arg(p)
    p.add_argument("--a", type=int, help="exponent a (default: surface.a from the problem)")
    p.add_argument("--out", "-o", help="plan document path (JSON)")
    p.set_defaults(func=cmd_surface_plan)

    p = subparsers.add_parser("replan", help="re-run every check of a stored plan")
    p.add_argument("--verify", required=True, metavar="PLAN", help="plan document to verify")
    p.add_argument("--out", "-o", help="write the rebuilt document here")
    p.set_defaults(func=cmd_replan)
