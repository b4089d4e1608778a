"""Scripted reproduction pipelines for the four study figures.

Each pipeline draws Haar-random interferometers, runs the relevant samplers,
and writes aggregated ``event,<model>...`` count CSVs (all enumerable events,
zero counts included) plus JSON sidecars with run metadata.  Counts are raw;
per-model totals land in the sidecar so any normalization can be applied
downstream.  Randomness derives from one root seed via per-task stream keys
(figure, panel, matrix, model), so results are independent of worker
scheduling.
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from .certification import CountTable, chi_square_vs_reference
from .distinguishability import uniform_overlap_coefficients
from .io import format_event, save_matrix
from .linalg import haar_unitary
from .models import Model, meanfield_test_state_distribution
from .patterns import enumerate_patterns, pattern_total
from .rng import derive_rng
from .sampling import (
    postselect,
    sample_boson,
    sample_classical,
    sample_coherent,
    sample_meanfield,
    sample_pd,
)

FIGURES = (1, 2, 3, 4)


@dataclass(frozen=True)
class _Panel:
    figure: int
    index: int
    name: str
    input_pattern: tuple[int, ...]
    matrices: int
    samples: int
    models: tuple[str, ...]
    aggregate: bool  # sum counts over matrices (fig 1) vs one CSV per matrix


_PANELS: dict[int, tuple[_Panel, ...]] = {
    1: (
        _Panel(1, 0, "fig1_panel_a", (0, 1, 1, 0), 100, 100,
               ("boson", "meanfield", "coherent", "classical"), True),
        _Panel(1, 1, "fig1_panel_b", (0, 1, 1, 1, 0), 100, 100,
               ("boson", "meanfield", "coherent", "classical"), True),
    ),
    2: (
        _Panel(2, 0, "fig2", (1, 1, 1, 1), 4, 10_000, ("boson", "meanfield"), False),
    ),
    3: (
        _Panel(3, 0, "fig3", (0, 1, 1, 0), 4, 10_000, ("boson", "meanfield"), False),
    ),
    4: (
        _Panel(4, 0, "fig4", (1, 1, 1), 4, 10_000,
               ("boson", "classical", "pd", "meanfield"), False),
    ),
}


def _sample_counts(model: str, mat, pattern, samples: int, stream) -> tuple[Counter, Optional[float]]:
    """Run one sampler and return (event counts, retained fraction or None)."""
    n = pattern_total(pattern)
    if model == "boson":
        batch = sample_boson(mat, pattern, samples, stream)
    elif model == "classical":
        batch = sample_classical(mat, pattern, samples, stream)
    elif model == "meanfield":
        batch = sample_meanfield(mat, pattern, samples, stream, variant="shared")
    elif model == "pd":
        batch = sample_pd(mat, pattern, uniform_overlap_coefficients(n), samples, stream)
    elif model == "coherent":
        alpha = tuple(float(v) for v in pattern)
        batch = postselect(sample_coherent(mat, alpha, samples, stream), n)
    else:
        raise ValueError(f"unknown figure model {model!r}")
    return Counter(batch.events), batch.retained_fraction


def _run_matrix(args) -> tuple[int, dict[str, Counter], dict[str, Optional[float]], list]:
    """Worker: all models of one panel on one Haar matrix."""
    panel, seed, matrix_index = args
    mat = haar_unitary(
        len(panel.input_pattern),
        derive_rng(seed, panel.figure, panel.index, matrix_index, 0),
    )
    counts: dict[str, Counter] = {}
    retained: dict[str, Optional[float]] = {}
    for model_index, model in enumerate(panel.models):
        stream = derive_rng(seed, panel.figure, panel.index, matrix_index, 1 + model_index)
        counts[model], retained[model] = _sample_counts(
            model, mat, panel.input_pattern, panel.samples, stream
        )
    return matrix_index, counts, retained, [[complex(v) for v in row] for row in mat]


def _write_counts_csv(path: Path, panel: _Panel, counts: dict[str, Counter]) -> None:
    universe = enumerate_patterns(pattern_total(panel.input_pattern), len(panel.input_pattern))
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["event"] + list(panel.models))
        for event in universe:
            writer.writerow(
                [format_event(event)] + [counts[m].get(event, 0) for m in panel.models]
            )


def _write_sidecar(path: Path, payload: dict) -> None:
    payload = dict(payload)
    payload["created"] = datetime.now(timezone.utc).isoformat()
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def reproduce(figure: int, seed: int, outdir, workers: int = 1) -> list[Path]:
    """Run one figure pipeline; returns the paths of the CSVs written."""
    if figure not in _PANELS:
        raise ValueError(f"unknown figure {figure}; choose from {FIGURES}")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for panel in _PANELS[figure]:
        tasks = [(panel, seed, m) for m in range(panel.matrices)]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_run_matrix, tasks))
        else:
            results = [_run_matrix(t) for t in tasks]
        results.sort(key=lambda r: r[0])
        if panel.aggregate:
            written.append(_emit_aggregate(outdir, panel, seed, results))
        else:
            written.extend(_emit_per_matrix(outdir, panel, seed, results))
    return written


def _emit_aggregate(outdir: Path, panel: _Panel, seed: int, results) -> Path:
    totals: dict[str, Counter] = {m: Counter() for m in panel.models}
    retained_events = 0
    for _, counts, _, _ in results:
        for model in panel.models:
            totals[model].update(counts[model])
        if "coherent" in panel.models:
            retained_events += sum(counts["coherent"].values())
    csv_path = outdir / f"{panel.name}.csv"
    _write_counts_csv(csv_path, panel, totals)
    drawn = panel.matrices * panel.samples
    sidecar = {
        "figure": panel.figure,
        "seed": seed,
        "input": list(panel.input_pattern),
        "matrices": panel.matrices,
        "samples_per_matrix": panel.samples,
        "models": list(panel.models),
        "totals": {m: sum(totals[m].values()) for m in panel.models},
    }
    if "coherent" in panel.models:
        sidecar["coherent_retained_fraction"] = retained_events / drawn
    _write_sidecar(csv_path.with_suffix(".json"), sidecar)
    return csv_path


def _emit_per_matrix(outdir: Path, panel: _Panel, seed: int, results) -> list[Path]:
    n = pattern_total(panel.input_pattern)
    test_state = len(panel.input_pattern) == n
    null = meanfield_test_state_distribution(n) if test_state else None
    paths: list[Path] = []
    for matrix_index, counts, _, mat in results:
        stem = f"{panel.name}_matrix{matrix_index + 1}"
        csv_path = outdir / f"{stem}.csv"
        _write_counts_csv(csv_path, panel, counts)
        save_matrix(outdir / f"{stem}_unitary.json", mat)
        sidecar = {
            "figure": panel.figure,
            "seed": seed,
            "matrix_index": matrix_index,
            "input": list(panel.input_pattern),
            "samples": panel.samples,
            "models": list(panel.models),
            "matrix_file": f"{stem}_unitary.json",
        }
        if null is not None:
            # test-state runs record how each model fares against the
            # matrix-free mean-field null (notably the shared-phase variant)
            p_values = {}
            for model in panel.models:
                table = CountTable(
                    dict(counts[model]), n, len(panel.input_pattern),
                    sum(counts[model].values()),
                )
                _, _, p_values[model] = chi_square_vs_reference(table, null)
            sidecar["null_p_values"] = p_values
        _write_sidecar(csv_path.with_suffix(".json"), sidecar)
        paths.append(csv_path)
    return paths
