"""Deterministic CSV emission for scenario results.

Floats are serialized with the shortest round-trippable decimal form
(%.17g), rows keep the order the scenario produced them in, and files are
written with plain "\n" newlines, so rerunning the same configuration
reproduces the output byte for byte.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .scenarios import ScenarioResult

RESULTS_HEADER = "scenario,case,metric,value,tolerance,passed"

_KNOWN_FORMATS = ("results", "plotdata", "snapshots")


def format_float(v: float) -> str:
    return "%.17g" % float(v)


def _write_lines(path: Path, lines: list[str]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _results_lines(result: ScenarioResult) -> list[str]:
    lines = [RESULTS_HEADER]
    for r in result.rows:
        tol = "" if r.tolerance is None else format_float(r.tolerance)
        flag = "true" if r.passed else "false"
        lines.append(",".join(
            [r.scenario, r.case, r.metric, format_float(r.value), tol, flag]
        ))
    return lines


def _table_lines(header: list[str], rows: list[tuple]) -> list[str]:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(v) for v in row))
    return lines


def _snapshot_lines(fld) -> list[str]:
    grid = fld.grid
    coords = [m.ravel() for m in grid.mesh()]
    re = np.real(fld.values).ravel()
    im = np.imag(fld.values).ravel()
    dens = fld.density().ravel()
    header = ["x", "y"][: grid.dim] + ["re", "im", "density"]
    lines = [",".join(header)]
    for row in zip(*coords, re, im, dens):
        lines.append(",".join(format_float(v) for v in row))
    return lines


def emit(result: ScenarioResult, out_dir, formats=("results", "plotdata")) -> list[Path]:
    """Write the requested output families under out_dir; returns paths.

    "results" is the per-metric report, "plotdata" the scenario's plot
    tables, "snapshots" the stored fields (one CSV per snapshot).  An empty
    report is treated as a defect in the calling code.
    """
    for f in formats:
        if f not in _KNOWN_FORMATS:
            raise ValueError(
                f"unknown output format {f!r} (choose from {', '.join(_KNOWN_FORMATS)})"
            )
    if not result.rows:
        raise ValueError(f"scenario {result.scenario!r} produced no report rows")

    out = Path(out_dir)
    written: list[Path] = []
    if "results" in formats:
        written.append(_write_lines(out / "results.csv", _results_lines(result)))
    if "plotdata" in formats:
        for name, (header, rows) in result.plotdata.items():
            written.append(
                _write_lines(out / "plotdata" / f"{name}.csv",
                             _table_lines(header, rows))
            )
    if "snapshots" in formats:
        for idx, fld in enumerate(result.snapshots):
            written.append(
                _write_lines(out / "snapshots" / f"snapshot_{idx:04d}.csv",
                             _snapshot_lines(fld))
            )
    return written
