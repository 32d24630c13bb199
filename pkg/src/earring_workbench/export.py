"""CSV and SVG export of sampled paths, sigma_n tables and density reports."""

from __future__ import annotations

import csv
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import TYPE_CHECKING

from earring_workbench.certified import format_rational
from earring_workbench.earring import EarringPoint, PiecewisePath, chord_coordinates, sample_times

if TYPE_CHECKING:
    from earring_workbench.seqorder import DensityReport
    from earring_workbench.workbench import SigmaSample

logger = logging.getLogger(__name__)

SIGMA_COLUMNS = ("t", "circle", "turn", "error_bound")
PATH_COLUMNS = ("time", "circle", "turn")
DENSITY_COLUMNS = ("grid_point", "distance")


def _write_rows(target: str | Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> int:
    count = 0
    with Path(target).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
            count += 1
    logger.info("wrote %d rows to %s", count, target)
    return count


def write_sigma_csv(samples: Sequence[SigmaSample], target: str | Path) -> int:
    return _write_rows(target, SIGMA_COLUMNS, (s.row() for s in samples))


def write_path_csv(path: PiecewisePath, target: str | Path, samples: int) -> int:
    times = sample_times(path.total_length, samples)
    rows = []
    for t in times:
        point = path.evaluate(t)
        rows.append([format_rational(t), point.circle, format_rational(point.turn)])
    return _write_rows(target, PATH_COLUMNS, rows)


def write_density_csv(report: DensityReport, target: str | Path) -> int:
    return _write_rows(
        target,
        DENSITY_COLUMNS,
        ([format_rational(x), format_rational(d)] for x, d in report.rows),
    )


def svg_document(points: Sequence[EarringPoint]) -> str:
    """One ``<polyline>`` of the chord-metric trace; y grows upwards."""
    coords = " ".join(
        f"{x:.6f},{-y:.6f}" for x, y in (chord_coordinates(p) for p in points)
    )
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-0.05 -1.05 2.1 2.1" '
        'width="512" height="512">\n'
        f'  <polyline fill="none" stroke="black" stroke-width="0.004" points="{coords}"/>\n'
        "</svg>\n"
    )


def write_svg(points: Sequence[EarringPoint], target: str | Path) -> int:
    Path(target).write_text(svg_document(points), encoding="utf-8")
    logger.info("wrote %d-point polyline to %s", len(points), target)
    return len(points)
