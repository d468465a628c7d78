"""
📈 plot: wall data as CSV, optionally a static SVG

    --along line    β_{F,i} on the ample line (1−u)L₀ + uL₁
    --along sigma|eta|zeta
                    entries h_i of p_F − p_τ along the chosen segment

CSV cells are exact: terminating decimals where the denominator allows,
"p/q" otherwise. The SVG is only a picture and is drawn from floats.
"""

import csv
import logging

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from config import get_plot_samples
from errors import InputError
from exact import exact_decimal, rat
from stability import StabilitySegment, SubsheafFamily, difference_vector
from walls import ample_line_table, segment_walls

from . import EXIT_OK, out
from .formats import load_problem
from .zoom import LEVELS, add_segment_args, build_segment

logger = logging.getLogger("zoomwall.cli.plot")


def segment_table(seg: StabilitySegment, fam: SubsheafFamily, samples: int) -> list[dict]:
    """h_i(v) for every member at v = j/samples and at every wall of the segment."""
    walls = set(segment_walls(seg, fam).values)
    points = sorted({rat(j) / samples for j in range(samples + 1)} | walls)
    rows = []
    for F in fam.usable():
        polys = difference_vector(F, fam.ambient, seg).polys()
        for v in points:
            rows.append({
                "member": F.name,
                seg.variable: exact_decimal(v),
                "wall": "1" if v in walls else "",
                **{f"h{i}": exact_decimal(p.eval(v)) for i, p in enumerate(polys, start=1)},
            })
    return rows


def line_table(fam: SubsheafFamily, L0, L1, samples: int) -> list[dict]:
    rows = []
    for F in fam.usable():
        rows += [{"member": F.name, **row} for row in ample_line_table(F, fam.ambient, L0, L1, samples)]
    return rows


def write_csv(rows: list[dict], path: str):
    if not rows:
        raise InputError("Nothing to plot: the family has no usable members")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    logger.info(f"💾 {len(rows)} row(s) written to {path}")


def write_svg(rows: list[dict], axis: str, walls: list, path: str, title: str):
    columns = [c for c in rows[0] if c not in ("member", axis, "wall")]
    fig, ax = plt.subplots(figsize=(7, 4))
    for name in dict.fromkeys(row["member"] for row in rows):
        mine = [row for row in rows if row["member"] == name]
        xs = [float(rat(row[axis])) for row in mine]
        for column in columns:
            ax.plot(xs, [float(rat(row[column])) for row in mine], label=f"{name} {column}")
    for w in walls:
        ax.axvline(float(w), color="grey", linestyle="--", linewidth=0.8)
    ax.axhline(0, color="black", linewidth=0.5)
    ax.set_xlabel(axis)
    ax.set_title(title)
    ax.legend(fontsize="small")
    fig.savefig(path, format="svg")
    plt.close(fig)
    logger.info(f"🖼️ SVG written to {path}")


def _line_walls(rows: list[dict]) -> list:
    return sorted({rat(row["u"]) for row in rows if row["wall"]})


def cmd_plot(args) -> int:
    problem = load_problem(args.problem)
    fam = problem.require_family()
    samples = args.samples or get_plot_samples()

    if args.along == "line":
        request = problem.spec.plan
        L0 = problem.bundle(args.L0 or (request.L0 if request else "L0"))
        L1 = problem.bundle(args.L1 or (request.L1 if request else "L1"))
        rows = line_table(fam, L0, L1, samples)
        axis, walls, title = "u", _line_walls(rows), "walls on the ample line"
    else:
        seg = build_segment(problem, args, args.along).segment
        rows = segment_table(seg, fam, samples)
        axis, walls, title = seg.variable, segment_walls(seg, fam).values, seg.label

    write_csv(rows, args.out)
    if args.svg:
        write_svg(rows, axis, walls, args.svg, title)
    out(f"{len(rows)} row(s), {len(walls)} wall(s) -> {args.out}")
    return EXIT_OK


def register(subparsers):
    p = subparsers.add_parser("plot", help="CSV (and optional SVG) of wall data")
    p.add_argument("--along", choices=("line", *LEVELS), default="line")
    p.add_argument("--out", "-o", required=True, help="CSV path")
    p.add_argument("--svg", help="also draw an SVG here")
    p.add_argument("--samples", type=int, help="sample intervals (default ZOOMWALL_PLOT_SAMPLES)")
    add_segment_args(p)
    p.set_defaults(func=cmd_plot)
