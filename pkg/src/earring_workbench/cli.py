"""Command-line front door: ``earring-workbench <command> ...``.

Exit codes: 0 when everything checked passes, 1 on a failing check or an unwritable output
file, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from earring_workbench.certified import format_rational
from earring_workbench.config import WorkbenchSettings
from earring_workbench.earring import EarringPoint
from earring_workbench.errors import WorkbenchError
from earring_workbench.export import write_density_csv, write_sigma_csv, write_svg
from earring_workbench.seqorder import tau
from earring_workbench.suites import SUITES
from earring_workbench.workbench import Workbench

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _emit(args: argparse.Namespace, payload: Any, text: str) -> None:
    if args.json:
        print(json.dumps(payload, ensure_ascii=False, indent=2, default=str))
    else:
        print(text)


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise WorkbenchError(f"cannot read {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_tau(wb: Workbench, args: argparse.Namespace) -> int:
    report = wb.tau(args.seq, args.depth)
    _emit(args, report.model_dump(), str(report))
    return EXIT_OK if report.contained else EXIT_FAILURE


def cmd_enum_b(wb: Workbench, args: argparse.Namespace) -> int:
    rows = [{"seq": str(s), "tau": format_rational(tau(s))} for s in wb.enumerate_b(args.n)]
    _emit(args, rows, "\n".join(f"{row['seq']}\t{row['tau']}" for row in rows))
    return EXIT_OK


def cmd_density(wb: Workbench, args: argparse.Namespace) -> int:
    report = wb.density(args.depth, args.grid)
    if args.csv:
        write_density_csv(report, args.csv)
    payload = {"depth": report.depth, "grid": report.grid,
               "max_gap": format_rational(report.max_gap)}
    _emit(args, payload, f"depth {report.depth}, grid {report.grid}: max gap "
                         f"{format_rational(report.max_gap)}")
    return EXIT_OK


def cmd_sigma(wb: Workbench, args: argparse.Namespace) -> int:
    samples = wb.sigma_samples(args.n, args.samples, args.depth)
    if args.csv:
        write_sigma_csv(samples, args.csv)
    if args.svg:
        write_svg([EarringPoint(s.circle, s.turn) for s in samples], args.svg)
    rows = [dict(zip(("t", "circle", "turn", "error_bound"), s.row())) for s in samples]
    worst = max((s.error_bound for s in samples), default=0)
    _emit(args, rows, f"sigma_{args.n}: {len(rows)} samples, largest error bound "
                      f"{format_rational(worst)}")
    return EXIT_OK


def cmd_word(wb: Workbench, args: argparse.Namespace) -> int:
    report = wb.project_word(args.k)
    _emit(args, report.model_dump(), str(report))
    expected = None if report.is_single_commutator is None else args.k == 1
    ok = report.equals_power and report.is_single_commutator == expected
    return EXIT_OK if ok else EXIT_FAILURE


def cmd_suite(wb: Workbench, args: argparse.Namespace) -> int:
    report = wb.run_suite(args.name)
    lines = [
        f"{'PASS' if check.passed else 'FAIL'}  {check.check_id}  {check.statement}"
        + (f"  [{check.detail}]" if check.detail else "")
        for check in report.checks
    ]
    lines.append(f"{args.name}: {len(report.checks) - len(report.failures)}/"
                 f"{len(report.checks)} checks passed")
    _emit(args, report.model_dump(mode="json"), "\n".join(lines))
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_homology(wb: Workbench, args: argparse.Namespace) -> int:
    report = wb.homology(_read_json(args.complex))
    text = "\n".join(f"H_{k} = {group}" for k, group in enumerate(report.groups))
    _emit(args, report.model_dump(), text)
    return EXIT_OK if report.consistent else EXIT_FAILURE


def cmd_current_demo(wb: Workbench, args: argparse.Namespace) -> int:
    result, report = wb.current_to_chain(_read_json(args.current), args.epsilon)
    certificate = result.certificate
    text = (
        f"{len(result.pieces)} pieces, {len(result.chain)} paths; "
        f"max piece diameter <= {certificate.max_diameter_bound} (epsilon {certificate.epsilon}); "
        f"certificate {'verified' if report.passed else 'REJECTED'}"
    )
    _emit(args, report.model_dump(mode="json"), text)
    return EXIT_OK if report.passed else EXIT_FAILURE


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--config", help="JSON settings file (default $EARRING_WORKBENCH_CONFIG)")
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for INFO, -vv for DEBUG logging on stderr")

    parser = argparse.ArgumentParser(
        prog="earring-workbench",
        description="Exact verification workbench for the Hawaiian earring constructions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tau", parents=[common], help="tau(s) with its oracle interval")
    p.add_argument("seq", help="sequence literal such as 1,2,1")
    p.add_argument("--depth", type=_positive)
    p.set_defaults(handler=cmd_tau)

    p = sub.add_parser("enum-b", parents=[common], help="list B_n in increasing order")
    p.add_argument("n", type=_positive)
    p.set_defaults(handler=cmd_enum_b)

    p = sub.add_parser("density", parents=[common], help="largest gap left by the intervals")
    p.add_argument("depth", type=_positive)
    p.add_argument("--grid", type=_positive)
    p.add_argument("--csv", help="write (grid_point, distance) rows")
    p.set_defaults(handler=cmd_density)

    p = sub.add_parser("sigma", parents=[common], help="sample sigma_n")
    p.add_argument("n", type=int)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--depth", type=_positive)
    p.add_argument("--csv", help="write (t, circle, turn, error_bound) rows")
    p.add_argument("--svg", help="write the chord-metric trace as an SVG polyline")
    p.set_defaults(handler=cmd_sigma)

    p = sub.add_parser("word", parents=[common], help="project sigma_1 to F(a, b)")
    p.add_argument("k", type=int)
    p.set_defaults(handler=cmd_word)

    p = sub.add_parser("suite", parents=[common], help="run a verification suite")
    p.add_argument("name", choices=SUITES + ("all",))
    p.add_argument("--depth", type=_positive, help="override the sigma resolution depth")
    p.add_argument("--samples", type=_positive, help="override the sample counts")
    p.set_defaults(handler=cmd_suite)

    p = sub.add_parser("homology", parents=[common], help="homology of a complex JSON file")
    p.add_argument("complex", help="JSON with 'facets' or 'sizes' and 'matrices'")
    p.set_defaults(handler=cmd_homology)

    p = sub.add_parser("current-demo", parents=[common],
                       help="represent a current by a chain of small pieces")
    p.add_argument("current", help="current JSON file")
    p.add_argument("--epsilon", required=True, help="rational target diameter, e.g. 1/2")
    p.set_defaults(handler=cmd_current_demo)
    return parser


def _settings(args: argparse.Namespace) -> WorkbenchSettings:
    settings = WorkbenchSettings.load(args.config)
    if args.command == "suite":
        samples = args.samples
        settings = settings.override(
            recursion_depth=args.depth,
            recursion_samples=samples,
            chain_samples=samples,
            current_samples=samples,
        )
    return settings


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        wb = Workbench(settings=_settings(args))
        logger.debug("running %s with %s", args.command, wb.settings)
        if args.command == "sigma" and args.samples is None:
            args.samples = wb.settings.svg_samples if args.svg else 16
        return int(args.handler(wb, args))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except WorkbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
