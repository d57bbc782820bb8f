"""CSV and JSON artifacts.

Per-round CSV columns (UTF-8, header always present)::

    round,alive,energy_consumed_j,cumulative_energy_j,ch_count,protocol,seed

Floats are written with ``repr`` so a parse gives back the exact values.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

from wepsim.metrics import RunSummary, aggregate

CSV_HEADER = (
    "round",
    "alive",
    "energy_consumed_j",
    "cumulative_energy_j",
    "ch_count",
    "protocol",
    "seed",
)


class ReportError(OSError):
    pass


def _runs(run_or_batch) -> list:
    if isinstance(run_or_batch, (list, tuple)):
        return list(run_or_batch)
    return [run_or_batch]


def emit_csv(run_or_batch, path) -> Path:
    path = Path(path)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for run in _runs(run_or_batch):
                cumulative = 0.0
                for i in range(run.final_round):
                    e = float(run.energy_consumed[i])
                    cumulative += e
                    w.writerow((
                        i + 1,
                        int(run.alive[i]),
                        repr(e),
                        repr(cumulative),
                        int(run.ch_count[i]),
                        run.protocol,
                        run.seed,
                    ))
    except OSError as exc:
        raise ReportError(f"cannot write CSV {path}: {exc}") from exc
    return path


def read_csv(path) -> list[dict]:
    """Parse a per-round CSV back into typed rows."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {path}: {reader.fieldnames}")
        return [
            {
                "round": int(row["round"]),
                "alive": int(row["alive"]),
                "energy_consumed_j": float(row["energy_consumed_j"]),
                "cumulative_energy_j": float(row["cumulative_energy_j"]),
                "ch_count": int(row["ch_count"]),
                "protocol": row["protocol"],
                "seed": int(row["seed"]),
            }
            for row in reader
        ]


def _clean(obj):
    # JSON has no NaN/inf; metrics never produce them, but guard the writer
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def summary_document(groups: dict[str, Sequence[RunSummary]], extra: dict | None = None) -> dict:
    """``groups`` maps a label (protocol, or protocol plus sweep point) to the
    summaries of its seeds."""
    doc = dict(extra or {})
    doc["groups"] = {
        label: {
            "runs": [s.to_dict() for s in summaries],
            "aggregate": aggregate(summaries),
        }
        for label, summaries in groups.items()
    }
    return _clean(doc)


def write_json(doc: dict, path) -> Path:
    path = Path(path)
    try:
        path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ReportError(f"cannot write JSON {path}: {exc}") from exc
    return path


def write_rows(rows: Iterable[dict], header: Sequence[str], path) -> Path:
    path = Path(path)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=list(header), lineterminator="\n")
            w.writeheader()
            for row in rows:
                w.writerow({k: ("" if row[k] is None else row[k]) for k in header})
    except OSError as exc:
        raise ReportError(f"cannot write CSV {path}: {exc}") from exc
    return path
