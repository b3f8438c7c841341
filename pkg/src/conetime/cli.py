"""Command-line interface.

Subcommands: validate, gh-check, trace, return-times, signal, infer.
Output is a human-readable table by default or a structured record
document with ``--format records``.  Exit codes are a stable contract:
0 success, 1 I/O error, 2 invalid input, 3 check failed, 4 search
budget exceeded.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import io as cio
from .errors import ConetimeError, SearchBudgetExceeded
from .exact import parse_angle, angle_value
from .particle import (
    ObserverLine,
    ParticleModel,
    admissible_windings,
    infer_parameters,
    positivity_threshold,
    return_direction,
    return_time,
)
from .spacetime import (
    StationarySpacetime,
    gh_check,
    is_paradoxical,
    leg_ctc_contacts,
    paradox_guard,
    signal_time,
)
from .tracing import DirectionState
from .geodesics import trace

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2
EXIT_CHECK_FAILED = 3
EXIT_BUDGET = 4


def _fmt(x, digits=9):
    if isinstance(x, float):
        return f"{x:.{digits}g}"
    return str(x)


def _print_records(records, out):
    out.write(cio.emit_records(records))


def cmd_validate(args, out):
    surface = cio.build_surface(args.surface)
    if args.format == "records":
        records = [
            (
                "surface",
                [
                    ("triangles", len(surface.triangles)),
                    ("vertices", len(surface.vertex_classes)),
                    ("euler", surface.euler_characteristic),
                    ("area", surface.total_area),
                    ("gauss_bonnet_residual", surface.gauss_bonnet_residual),
                ],
            )
        ]
        for vc in sorted(surface.cone_points, key=lambda v: v.label):
            records.append(
                ("cone", [("label", vc.label), ("angle", vc.angle)])
            )
        _print_records(records, out)
    else:
        out.write(
            f"surface: {len(surface.triangles)} triangles, "
            f"{len(surface.vertex_classes)} vertex classes, "
            f"euler characteristic {surface.euler_characteristic}\n"
        )
        out.write(f"gauss-bonnet residual: {_fmt(surface.gauss_bonnet_residual)}\n")
        out.write("cone points:\n")
        for vc in sorted(surface.cone_points, key=lambda v: v.label):
            out.write(f"  {vc.label:<10} angle {_fmt(vc.angle, 12)}\n")
    return EXIT_OK


def cmd_gh_check(args, out):
    surface = cio.build_surface(args.surface)
    omega = cio.load_omega(args.omega, surface)
    st = StationarySpacetime(surface, omega)
    report = gh_check(st, args.loop_cutoff, budget=args.budget)
    if args.format == "records":
        records = [
            (
                "gh",
                [
                    ("verdict", report.verdict),
                    ("failed_condition", report.failed_condition or 0),
                    ("loop_cutoff", float(report.loop_cutoff)),
                ],
            )
        ]
        for c in sorted(report.cones, key=lambda c: c.label):
            records.append(
                (
                    "cone",
                    [
                        ("label", c.label),
                        ("ctc_radius", c.ctc_radius),
                        ("injectivity", c.injectivity_radius),
                        ("embedded", c.embedded),
                    ],
                )
            )
        for p in sorted(report.pairs, key=lambda p: (p.label_a, p.label_b)):
            records.append(
                (
                    "pair",
                    [
                        ("a", p.label_a),
                        ("b", p.label_b),
                        ("radius_sum", p.radius_sum),
                        ("distance", p.distance),
                        ("ok", p.ok),
                    ],
                )
            )
        if report.loop_report is not None:
            lr = report.loop_report
            records.append(
                (
                    "loops",
                    [
                        ("worst_ratio", lr.worst_ratio),
                        ("verified_up_to", lr.verified_up_to),
                        ("bases", lr.n_bases),
                        ("loops", lr.n_loops),
                        ("dropped", lr.n_dropped),
                        ("proven", lr.proven),
                    ],
                )
            )
        _print_records(records, out)
    else:
        out.write(f"verdict: {report.verdict}\n")
        if report.failed_condition:
            out.write(
                f"failed condition {report.failed_condition}: {report.witness}\n"
            )
        out.write("condition 1 (embedded CTC disks):\n")
        for c in sorted(report.cones, key=lambda c: c.label):
            out.write(
                f"  {c.label:<10} radius {_fmt(c.ctc_radius)} "
                f"injectivity {_fmt(c.injectivity_radius)} "
                f"{'ok' if c.embedded else 'FAIL'}\n"
            )
        out.write("condition 2 (disjoint CTC disks):\n")
        for p in sorted(report.pairs, key=lambda p: (p.label_a, p.label_b)):
            out.write(
                f"  {p.label_a}-{p.label_b}: radius sum {_fmt(p.radius_sum)} "
                f"vs distance {_fmt(p.distance)} {'ok' if p.ok else 'FAIL'}\n"
            )
        if report.loop_report is not None:
            lr = report.loop_report
            out.write(
                "condition 3 (loop periods below lengths): "
                f"worst ratio {_fmt(lr.worst_ratio)} over {lr.n_loops} loops "
                f"from {lr.n_bases} bases, verified up to length "
                f"{_fmt(lr.verified_up_to)}"
                + (" (proven: form vanishes)" if lr.proven else "")
                + ("\n" if lr.n_dropped == 0 else f"; {lr.n_dropped} near-disk loops dropped\n")
            )
    return EXIT_CHECK_FAILED if report.verdict == "fails" else EXIT_OK


def cmd_trace(args, out):
    surface = cio.build_surface(args.surface)
    x, y = (float(v) for v in args.point.split(","))
    dx, dy = (float(v) for v in args.direction.split(","))
    g = trace(
        surface,
        DirectionState(args.tri, (x, y), (dx, dy)),
        args.max_length,
    )
    if args.format == "records":
        records = [
            (
                "trace",
                [
                    ("length", g.length),
                    ("termination", g.termination),
                    ("segments", len(g.segments)),
                ],
            )
        ]
        for i, seg in enumerate(g.segments):
            records.append(
                (
                    "seg",
                    [
                        ("index", i),
                        ("tri", seg.tri),
                        ("x0", seg.entry[0]),
                        ("y0", seg.entry[1]),
                        ("x1", seg.exit[0]),
                        ("y1", seg.exit[1]),
                    ],
                )
            )
        _print_records(records, out)
    else:
        out.write(cio.write_trace(g))
    return EXIT_OK


def cmd_return_times(args, out):
    theta = parse_angle(args.theta)
    model = ParticleModel.make(theta, args.sigma)
    obs = ObserverLine(args.d, args.rapidity)
    windings = admissible_windings(model)
    rows = []
    for m in sorted(windings):
        dt = return_time(model, obs, args.t, m)
        rows.append(
            (
                m,
                dt,
                return_direction(model, m),
                positivity_threshold(model, m),
                dt <= 0.0,
            )
        )
    if args.format == "records":
        records = [
            (
                "model",
                [
                    ("theta0", angle_value(theta)),
                    ("sigma", args.sigma),
                    ("ctc_radius", model.ctc_radius),
                    ("paradox_radius", model.paradox_radius),
                ],
            )
        ]
        for m, dt, ang, thr, flag in rows:
            records.append(
                (
                    "return",
                    [
                        ("m", m),
                        ("dt", dt),
                        ("direction", ang),
                        ("threshold", thr),
                        ("paradox", flag),
                    ],
                )
            )
        _print_records(records, out)
    else:
        out.write(
            f"model: theta0 {_fmt(angle_value(theta), 12)} sigma {_fmt(args.sigma)} "
            f"ctc radius {_fmt(model.ctc_radius)} "
            f"paradox radius {_fmt(model.paradox_radius)}\n"
        )
        if not rows:
            out.write(
                "no returning rays: the cone angle is at least pi, so no "
                "geodesic returns to the observer\n"
            )
        else:
            out.write(f"{'m':>4} {'dt':>16} {'direction':>16} {'threshold':>16}  flag\n")
            for m, dt, ang, thr, flag in rows:
                out.write(
                    f"{m:>4} {_fmt(dt):>16} {_fmt(ang):>16} {_fmt(thr):>16}"
                    f"  {'PARADOX' if flag else 'ok'}\n"
                )
    return EXIT_OK


def cmd_signal(args, out):
    surface = cio.build_surface(args.surface)
    omega = cio.load_omega(args.omega, surface)
    st = StationarySpacetime(surface, omega)
    waypoints, legs = cio.load_signal(args.signal, surface)
    sig = signal_time(st, waypoints, legs)
    guard = paradox_guard(st, waypoints[:-1] if sig.closed else waypoints, budget=args.budget)
    paradox = is_paradoxical(sig) if sig.closed and sig.legs else None
    contacts = leg_ctc_contacts(st, sig)
    if args.format == "records":
        records = [
            (
                "signal",
                [
                    ("legs", len(sig.legs)),
                    ("closed", sig.closed),
                    ("elapsed", sig.elapsed),
                    ("guard", guard),
                    ("paradox", "n/a" if paradox is None else paradox),
                ],
            )
        ]
        for j in range(len(sig.legs)):
            records.append(
                (
                    "leg",
                    [
                        ("index", j),
                        ("length", sig.leg_lengths[j]),
                        ("period", sig.leg_periods[j]),
                        ("dt", sig.leg_lengths[j] - sig.leg_periods[j]),
                        ("t_end", sig.times[j + 1]),
                        ("ctc_contact", contacts[j]),
                    ],
                )
            )
        _print_records(records, out)
    else:
        out.write(
            f"{'leg':>4} {'length':>16} {'period':>16} {'dt':>16} {'t':>16}  ctc\n"
        )
        for j in range(len(sig.legs)):
            out.write(
                f"{j:>4} {_fmt(sig.leg_lengths[j]):>16} "
                f"{_fmt(sig.leg_periods[j]):>16} "
                f"{_fmt(sig.leg_lengths[j] - sig.leg_periods[j]):>16} "
                f"{_fmt(sig.times[j + 1]):>16}  {contacts[j]}\n"
            )
        out.write(f"elapsed: {_fmt(sig.elapsed)}\n")
        out.write(f"closed: {'yes' if sig.closed else 'no'}\n")
        out.write(f"paradox guard: {'pass' if guard else 'fail'}\n")
        out.write(
            "paradoxical: "
            + ("n/a (open chain)" if paradox is None else ("YES" if paradox else "no"))
            + "\n"
        )
    return EXIT_OK


def cmd_infer(args, out):
    theta0, sigma, d = infer_parameters(args.dt_plus, args.dt_minus, args.angle)
    if args.format == "records":
        _print_records(
            [("inferred", [("theta0", theta0), ("sigma", sigma), ("d", d)])], out
        )
    else:
        out.write(f"theta0: {_fmt(theta0, 12)}\n")
        out.write(f"sigma:  {_fmt(sigma, 12)}\n")
        out.write(f"d:      {_fmt(d, 12)}\n")
        out.write(f"mass:   {_fmt(2 * math.pi - theta0, 12)}\n")
    return EXIT_OK


def make_parser():
    p = argparse.ArgumentParser(
        prog="conetime",
        description="Stationary flat spacetimes from cone surfaces: "
        "validation, geodesics, light signals, causality checks.",
    )
    p.add_argument(
        "--format", choices=("table", "records"), default="table",
        help="output style (default: table)",
    )
    p.add_argument(
        "--budget", type=int, default=None,
        help="chart-expansion cap for unfolding searches "
        "(default: CONETIME_BUDGET env var or 1000000)",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="validate a surface document")
    v.add_argument("surface")
    v.set_defaults(func=cmd_validate)

    g = sub.add_parser("gh-check", help="run the global-hyperbolicity criterion")
    g.add_argument("surface")
    g.add_argument("omega")
    g.add_argument("--loop-cutoff", type=float, default=4.0)
    g.set_defaults(func=cmd_gh_check)

    t = sub.add_parser("trace", help="trace a geodesic on a surface")
    t.add_argument("surface")
    t.add_argument("--tri", type=int, required=True)
    t.add_argument("--point", required=True, help="x,y in the chart")
    t.add_argument("--direction", required=True, help="dx,dy")
    t.add_argument("--max-length", type=float, required=True)
    t.set_defaults(func=cmd_trace)

    r = sub.add_parser(
        "return-times", help="returning-lightray table for one particle"
    )
    r.add_argument("--theta", required=True, help="cone angle: float or p/qpi")
    r.add_argument("--sigma", type=float, required=True, help="spin")
    r.add_argument("--d", type=float, required=True, help="observer distance")
    r.add_argument("--rapidity", type=float, default=0.0)
    r.add_argument("--t", type=float, default=0.0, help="emission eigentime")
    r.set_defaults(func=cmd_return_times)

    s = sub.add_parser("signal", help="time a relayed light signal")
    s.add_argument("surface")
    s.add_argument("omega")
    s.add_argument("signal")
    s.set_defaults(func=cmd_signal)

    i = sub.add_parser("infer", help="recover particle parameters from returns")
    i.add_argument("--dt-plus", type=float, required=True)
    i.add_argument("--dt-minus", type=float, required=True)
    i.add_argument("--angle", type=float, required=True,
                   help="angle between the two returning rays (radians)")
    i.set_defaults(func=cmd_infer)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: cannot read {exc.filename}\n")
        return EXIT_IO
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except SearchBudgetExceeded as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BUDGET
    except ConetimeError as exc:
        sys.stderr.write(f"error: {exc.__class__.__name__}: {exc}\n")
        return EXIT_INVALID
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
