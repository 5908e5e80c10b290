"""Command-line interface.

Subcommands: ``plan`` runs a planner between two configuration files and can
export the sampled path as JSON or CSV plus a trajectory figure; ``braid``
inspects a braid word; ``partition`` runs a stratum census with an optional
histogram figure; ``sample`` writes a random configuration file.

Exit codes: 0 success, 2 input parse failure, 3 path validation failure,
4 linking data requested for a non-pure word.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .braids import (
    BraidWord,
    conjugation_image,
    hub_property,
    is_pure,
    linking_matrix,
    permutation_of,
)
from .geometry import load_configuration, save_configuration
from .harness import (
    partition_check,
    path_export,
    random_configuration,
    run_planner,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_NOT_PURE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strataplan",
        description="Stratified motion planners on the annulus and the disc, "
        "with braid linking invariants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan a collision-free path between two configurations")
    p.add_argument("--surface", choices=("annulus", "disc3"), required=True)
    p.add_argument("--start", required=True, help="start configuration file (JSON)")
    p.add_argument("--goal", required=True, help="goal configuration file (JSON)")
    p.add_argument("--samples", type=int, default=129, help="exported time samples")
    p.add_argument("--svg", help="write a trajectory figure to this file")
    p.add_argument("--json", dest="json_out", help="write the sampled path as JSON")
    p.add_argument("--csv", dest="csv_out", help="write the sampled path as CSV")

    b = sub.add_parser("braid", help="inspect a braid word")
    b.add_argument("--n", type=int, required=True, help="strand count")
    b.add_argument("--word", required=True, help='word like "s1 s2^-1 s2 s1" (e = empty)')
    b.add_argument("--linking", action="store_true", help="print the linking matrix")
    b.add_argument("--hub", type=int, metavar="K", help="check the k-hub property")
    b.add_argument("--conjugate", metavar="GWORD", help="conjugate by a word and cross-check")

    c = sub.add_parser("partition", help="stratum census over random pairs")
    c.add_argument("--surface", choices=("annulus", "disc3"), required=True)
    c.add_argument("--n", type=int, default=3)
    c.add_argument("--trials", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--csv", dest="csv_out", help="write the histogram as CSV")
    c.add_argument("--fig", help="write a histogram figure to this file")

    s = sub.add_parser("sample", help="write a random configuration file")
    s.add_argument("--surface", choices=("annulus", "disc3"), required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    return parser


def _cmd_plan(args) -> int:
    try:
        start = load_configuration(args.start)
        goal = load_configuration(args.goal)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    want = "annulus" if args.surface == "annulus" else "disc"
    if start.kind != want or goal.kind != want:
        print(
            f"error: {args.surface} planning needs {want!r} configurations",
            file=sys.stderr,
        )
        return EXIT_PARSE
    if args.surface == "disc3" and (start.n != 3 or goal.n != 3):
        print("error: disc3 planning needs exactly 3 points", file=sys.stderr)
        return EXIT_PARSE
    if start.n != goal.n:
        print("error: start and goal have different sizes", file=sys.stderr)
        return EXIT_PARSE
    try:
        run = run_planner(args.surface, start, goal)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report = run.report
    print(f"stratum: {run.stratum}")
    print(f"segments: {len(run.path.segments)}")
    if "iterations" in run.trace:
        print(f"iterations: {run.trace['iterations']}")
    print(
        "validation: endpoints_ok={} min_separation={:.6g} "
        "max_step_displacement={:.6g} samples={}".format(
            report.endpoints_ok,
            report.min_separation,
            report.max_step_displacement,
            report.n_samples,
        )
    )
    export = path_export(run.path, args.samples)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            json.dump(export, fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.json_out}")
    if args.csv_out:
        _write_path_csv(export, args.csv_out)
        print(f"wrote {args.csv_out}")
    if args.svg:
        from .render import render_plan

        render_plan(export, args.svg)
        print(f"wrote {args.svg}")
    return EXIT_OK if report.ok else EXIT_INVALID


def _write_path_csv(export: dict, path: str) -> None:
    n = export["n"]
    header = ["t"]
    for j in range(n):
        header.extend([f"p{j}_a", f"p{j}_b"])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in export["samples"]:
            flat = [row["t"]]
            for pt in row["points"]:
                flat.extend(pt)
            writer.writerow(flat)


def _cmd_braid(args) -> int:
    try:
        word = BraidWord.from_text(args.n, args.word)
        gword = BraidWord.from_text(args.n, args.conjugate) if args.conjugate else None
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    pure = is_pure(word)
    print(f"word: {word.to_text()}")
    print(f"strands: {word.n}")
    print(f"permutation: {permutation_of(word)}")
    print(f"pure: {pure}")
    needs_pure = args.linking or args.hub is not None or gword is not None
    if needs_pure and not pure:
        print("error: linking data needs a pure word", file=sys.stderr)
        return EXIT_NOT_PURE
    if args.linking:
        matrix = linking_matrix(word)
        print("linking:")
        for (i, j), v in matrix.as_dict().items():
            print(f"  ({i},{j}): {v}")
    if args.hub is not None:
        try:
            verdict = hub_property(word, args.hub)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        print(f"hub({args.hub}): {verdict}")
    if gword is not None:
        image = conjugation_image(word, gword)
        print(f"conjugated by: {gword.to_text()}")
        print("conjugation check: direct and relabelled linking matrices agree")
        print("conjugated linking:")
        for (i, j), v in image.as_dict().items():
            print(f"  ({i},{j}): {v}")
    return EXIT_OK


def _cmd_partition(args) -> int:
    surface = "annulus" if args.surface == "annulus" else "disc"
    n = args.n if surface == "annulus" else 3
    report = partition_check(surface, n, args.trials, args.seed)
    print(f"surface: {args.surface}  n: {n}  trials: {report.trials}")
    for label in sorted(report.histogram):
        print(f"  {label}: {report.histogram[label]}")
    if args.csv_out:
        with open(args.csv_out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["label", "count"])
            for label in sorted(report.histogram):
                writer.writerow([label, report.histogram[label]])
        print(f"wrote {args.csv_out}")
    if args.fig:
        from .render import render_partition

        render_partition(report.histogram, args.surface, args.fig)
        print(f"wrote {args.fig}")
    return EXIT_OK


def _cmd_sample(args) -> int:
    surface = "annulus" if args.surface == "annulus" else "disc"
    n = args.n if surface == "annulus" else 3
    c = random_configuration(surface, n, args.seed)
    save_configuration(c, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad flags, which matches the parse-failure code
        return int(exc.code) if exc.code else 0
    if args.command == "plan":
        return _cmd_plan(args)
    if args.command == "braid":
        return _cmd_braid(args)
    if args.command == "partition":
        return _cmd_partition(args)
    if args.command == "sample":
        return _cmd_sample(args)
    parser.error(f"unknown command {args.command!r}")
    return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
