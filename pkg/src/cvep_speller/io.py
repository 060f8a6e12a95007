"""Dictionary, epoch and report files.

Epoch files are line-oriented text. Each epoch is a header line::

    #cvep-epoch v1 fs=<Hz> period=<samples> reps=<count> channels=<count>

followed by one line per channel holding ``reps * period`` comma-separated
floats. Values are written with ``repr`` so they read back bit-exactly.
Several epochs may follow one another in a single file.
"""

from __future__ import annotations

import csv
import json
import re
from pathlib import Path
from typing import Iterable

import numpy as np

from .dsp import Epoch
from .exceptions import FormatError
from .harness import Report
from .lexicon import Dictionary, KeyboardLayout

HEADER_RE = re.compile(
    r"^#cvep-epoch v1 fs=(?P<fs>\S+) period=(?P<period>\d+) reps=(?P<reps>\d+) channels=(?P<channels>\d+)\s*$"
)
CSV_FIELDS = ("mode", "N", "trials", "lag_accuracy", "word_accuracy", "mean_letters", "seed")
DECIMALS = 6


def load_dictionary(path, layout: KeyboardLayout | None = None) -> Dictionary:
    """Read a word list; rejected entries are logged and kept on ``.rejected``."""
    return Dictionary.from_file(path, layout)


def write_epochs(path, epochs: Iterable[Epoch]) -> None:
    lines = []
    for ep in epochs:
        lines.append(
            f"#cvep-epoch v1 fs={ep.sampling_rate!r} period={ep.period_samples} "
            f"reps={ep.repetitions} channels={ep.n_channels}"
        )
        for row in ep.data:
            lines.append(",".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_epochs(path) -> list[Epoch]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    epochs, i = [], 0
    while i < len(lines):
        line = lines[i]
        if not line.strip():
            i += 1
            continue
        m = HEADER_RE.match(line)
        if m is None:
            raise FormatError(f"{path}:{i + 1}: expected '#cvep-epoch v1' header, got {line[:60]!r}")
        try:
            fs = float(m["fs"])
        except ValueError:
            raise FormatError(f"{path}:{i + 1}: bad sampling rate {m['fs']!r}") from None
        period, reps, channels = int(m["period"]), int(m["reps"]), int(m["channels"])
        if period < 1 or reps < 1 or channels < 1:
            raise FormatError(f"{path}:{i + 1}: period, reps and channels must be >= 1")
        rows = []
        for c in range(channels):
            lineno = i + 2 + c
            if lineno > len(lines) or lines[lineno - 1].startswith("#"):
                raise FormatError(f"{path}:{lineno}: file ends before channel {c} of {channels}")
            try:
                row = [float(v) for v in lines[lineno - 1].split(",")]
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from None
            if len(row) != reps * period:
                raise FormatError(
                    f"{path}:{lineno}: {len(row)} samples, header says {reps} x {period} = {reps * period}"
                )
            rows.append(row)
        try:
            epochs.append(Epoch(np.array(rows), fs, period, reps))
        except ValueError as exc:
            raise FormatError(f"{path}:{i + 1}: {exc}") from None
        i += 1 + channels
    return epochs


def report_rows(report: Report) -> list[dict]:
    return [
        {
            "mode": c.mode,
            "N": c.repetitions,
            "trials": c.trials,
            "lag_accuracy": round(c.lag_accuracy, DECIMALS),
            "word_accuracy": round(c.word_accuracy, DECIMALS),
            "mean_letters": round(c.mean_letters, DECIMALS),
            "seed": c.seed,
        }
        for c in report.cells
    ]


def write_report(report: Report, path, format: str = "csv") -> None:
    """Write the per-(mode, N) table as CSV or the full report as JSON."""
    path = Path(path)
    if format == "csv":
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_FIELDS)
            for row in report_rows(report):
                writer.writerow(
                    f"{row[k]:.{DECIMALS}f}" if isinstance(row[k], float) else row[k] for k in CSV_FIELDS
                )
    elif format == "json":
        doc = report.to_dict()
        for cell, row in zip(doc["cells"], report_rows(report)):
            cell.update(
                lag_accuracy=row["lag_accuracy"],
                word_accuracy=row["word_accuracy"],
                mean_letters=row["mean_letters"],
            )
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    else:
        raise ValueError(f"unknown report format {format!r}")
