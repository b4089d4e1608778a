"""File formats: matrix JSON, batch CSV with sidecar, distribution CSV, reports.

All CSV payloads are byte-deterministic for a given seed: rows are sorted by
event key and floats are serialized with ``repr`` (shortest round-trip).
Timestamps live only in JSON sidecars, never in the CSVs.
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from .linalg import UNITARY_TOL, is_unitary
from .patterns import Pattern
from .sampling import SampleBatch


class BatchParseError(ValueError):
    """Malformed batch CSV; message carries file and line number."""


def save_matrix(path, mat) -> None:
    """Write an interferometer as JSON: {"dim": N, "re": [[..]], "im": [[..]]}."""
    m = np.asarray(mat, dtype=np.complex128)
    payload = {
        "dim": int(m.shape[0]),
        "re": [[float(v) for v in row] for row in m.real],
        "im": [[float(v) for v in row] for row in m.imag],
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n")


def load_matrix(path, tol: float = UNITARY_TOL, require_unitary: bool = True) -> np.ndarray:
    """Read a matrix JSON file, re-validating unitarity by default."""
    data = json.loads(Path(path).read_text())
    try:
        dim = int(data["dim"])
        m = np.asarray(data["re"], dtype=np.float64) + 1j * np.asarray(
            data["im"], dtype=np.float64
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: not a matrix file ({exc})") from exc
    if m.shape != (dim, dim):
        raise ValueError(f"{path}: declared dim {dim} does not match shape {m.shape}")
    if require_unitary and not is_unitary(m, tol):
        raise ValueError(f"{path}: matrix is not unitary within {tol}")
    return m


def format_event(pattern: Sequence[int]) -> str:
    """Dash-joined occupation pattern, e.g. (1, 1, 0, 2) -> "1-1-0-2"."""
    return "-".join(str(int(v)) for v in pattern)


def parse_event(text: str) -> Pattern:
    try:
        values = tuple(int(part) for part in text.split("-"))
    except ValueError as exc:
        raise ValueError(f"bad event {text!r}") from exc
    if not values or any(v < 0 for v in values):
        raise ValueError(f"bad event {text!r}")
    return values


def write_batch(
    path,
    batch: SampleBatch,
    matrix_file: str = "",
    sidecar: bool = True,
    extra: Optional[dict] = None,
) -> Path:
    """Persist a batch as an aggregated ``event,count`` CSV plus a JSON sidecar."""
    path = Path(path)
    counts = Counter(batch.events)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["event", "count"])
        for event in sorted(counts):
            writer.writerow([format_event(event), counts[event]])
    if sidecar:
        meta = {
            "seed": batch.seed,
            "model": str(batch.model),
            "input": list(batch.input_state),
            "matrix_file": matrix_file,
            "samples": len(batch.events),
            "retained_fraction": batch.retained_fraction,
            "created": datetime.now(timezone.utc).isoformat(),
        }
        if extra:
            meta.update(extra)
        sidecar_path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def sidecar_path(batch_path) -> Path:
    return Path(batch_path).with_suffix(".json")


def read_batch_counts(path) -> Counter:
    """Read an ``event,count`` CSV back into a Counter.

    Raises :class:`BatchParseError` with the offending line number on any
    malformed row.
    """
    path = Path(path)
    counts: Counter = Counter()
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["event", "count"]:
            raise BatchParseError(f"{path}:1: expected header 'event,count', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise BatchParseError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            try:
                event = parse_event(row[0])
                count = int(row[1])
                if count < 0:
                    raise ValueError("negative count")
            except ValueError as exc:
                raise BatchParseError(f"{path}:{lineno}: {exc}") from exc
            counts[event] += count
    return counts


def write_distribution_csv(
    path,
    events: Sequence[Pattern],
    columns: Mapping[str, Mapping[Pattern, float]],
) -> Path:
    """Write one row per event with one probability column per model."""
    path = Path(path)
    names = list(columns)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["event"] + names)
        for event in events:
            writer.writerow(
                [format_event(event)]
                + [repr(float(columns[name].get(event, 0.0))) for name in names]
            )
    return path


def read_table_csv(path) -> tuple[list[str], dict[Pattern, list[float]]]:
    """Read an event-keyed CSV (distribution or figure counts) generically."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "event":
            raise ValueError(f"{path}: expected an 'event'-keyed CSV")
        names = header[1:]
        rows: dict[Pattern, list[float]] = {}
        for row in reader:
            if not row:
                continue
            rows[parse_event(row[0])] = [float(v) for v in row[1:]]
    return names, rows


def write_report(report, path=None) -> str:
    """Serialize a certification report to JSON; optionally also to a file."""
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
