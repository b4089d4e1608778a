"""Seeded samplers producing output events for each device model.

These are the operational black boxes the certifier interrogates.  Every
sampler is deterministic given (matrix, input, count, seed); batches destined
for parallel generation should be given independent derived streams
(:func:`bosoncert.rng.derive_rng`) rather than a shared generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .distinguishability import OverlapCoefficients, pd_output_distribution
from .models import (
    Model,
    boson_distribution,
    meanfield_shared_distribution,
)
from .patterns import (
    DEFAULT_PATTERN_CAP,
    Pattern,
    pattern_total,
    validate_pattern,
)
from .rng import SeedLike, as_generator

#: Vectorized samplers work through runs in blocks of this size to bound memory.
CHUNK = 1 << 16


@dataclass(frozen=True)
class SamplerSpec:
    """A model tag plus whatever parameters that model needs.

    ``amplitudes`` only for the coherent model, ``coefficients`` only for the
    partially distinguishable one; presence is enforced both ways.
    """

    model: Model
    amplitudes: Optional[tuple[float, ...]] = None
    coefficients: Optional[OverlapCoefficients] = None

    def __post_init__(self) -> None:
        model = Model(self.model)
        object.__setattr__(self, "model", model)
        if (model is Model.COHERENT) != (self.amplitudes is not None):
            raise ValueError("amplitudes are required by, and only by, the coherent model")
        if (model is Model.PARTIALLY_DISTINGUISHABLE) != (self.coefficients is not None):
            raise ValueError(
                "overlap coefficients are required by, and only by, the pd model"
            )


@dataclass(frozen=True)
class SampleBatch:
    """Output events of one sampler run.

    ``events`` preserves draw order.  All events conserve the input photon
    total except for the coherent model, whose totals are Poissonian.
    ``retained_fraction`` is set by :func:`postselect`.
    """

    model: Model
    input_state: tuple
    matrix_id: str
    seed: Optional[int]
    events: tuple[Pattern, ...] = field(repr=False)
    retained_fraction: Optional[float] = None

    def __len__(self) -> int:
        return len(self.events)


def _seed_value(seed: SeedLike) -> Optional[int]:
    return int(seed) if isinstance(seed, (int, np.integer)) else None


def _rows_to_events(rows: np.ndarray) -> list[Pattern]:
    return [tuple(int(v) for v in row) for row in rows]


def _categorical_batch(
    distribution, count: int, rng: np.random.Generator
) -> list[Pattern]:
    patterns = list(distribution.keys())
    probs = np.array([distribution[t] for t in patterns], dtype=np.float64)
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum()
    idx = rng.choice(len(patterns), size=count, p=probs)
    return [patterns[i] for i in idx]


def _modes_from_cdf(prob_rows: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    """Inverse-CDF categorical draws, one per uniform, row-wise."""
    cdf = np.cumsum(prob_rows, axis=-1)
    cdf[..., -1] = 1.0  # guard roundoff so argmax always fires
    return (uniforms[..., None] < cdf).argmax(axis=-1)


def _patterns_from_modes(modes: np.ndarray, num_modes: int) -> np.ndarray:
    runs = modes.shape[0]
    offsets = np.arange(runs)[:, None] * num_modes
    flat = np.bincount((modes + offsets).ravel(), minlength=runs * num_modes)
    return flat.reshape(runs, num_modes)


def sample_boson(
    mat,
    input_pattern,
    count: int,
    seed: SeedLike,
    matrix_id: str = "",
    cap: int = DEFAULT_PATTERN_CAP,
) -> SampleBatch:
    """I.i.d. draws from the exact boson distribution (full-inversion sampler).

    The entire distribution is materialized first, so the configuration cap
    applies; this is a desk-scale simulator, not an asymptotically efficient
    sampler.
    """
    s = validate_pattern(input_pattern)
    rng = as_generator(seed)
    events = _categorical_batch(boson_distribution(mat, s, cap), count, rng)
    return SampleBatch(Model.BOSON, s, matrix_id, _seed_value(seed), tuple(events))


def sample_classical(
    mat, input_pattern, count: int, seed: SeedLike, matrix_id: str = ""
) -> SampleBatch:
    """Distinguishable photons routed independently; no permanents involved.

    Each photon entering mode j lands in mode k with probability
    |mat[k, j]|^2; a run's event is the sum of per-mode multinomial draws.
    """
    s = validate_pattern(input_pattern)
    m = np.asarray(mat, dtype=np.complex128)
    if m.shape != (len(s), len(s)):
        raise ValueError(f"matrix shape {m.shape} does not match {len(s)} modes")
    rng = as_generator(seed)
    weights = np.abs(m) ** 2
    out = np.zeros((count, len(s)), dtype=np.int64)
    for j, photons in enumerate(s):
        if photons:
            col = weights[:, j] / weights[:, j].sum()
            out += rng.multinomial(photons, col, size=count)
    events = _rows_to_events(out)
    return SampleBatch(Model.CLASSICAL, s, matrix_id, _seed_value(seed), tuple(events))


def sample_meanfield(
    mat,
    input_pattern,
    count: int,
    seed: SeedLike,
    variant: str = "shared",
    matrix_id: str = "",
) -> SampleBatch:
    """Mean-field sampler: one superposed single photon per shot, n shots per run.

    ``variant="shared"`` draws one phase vector per run, shared by all n
    photons of that run; ``variant="independent"`` regenerates the phases for
    every photon.  Both require a 0/1 input pattern.
    """
    if variant not in ("shared", "independent"):
        raise ValueError(f"variant must be 'shared' or 'independent', got {variant!r}")
    s = validate_pattern(input_pattern)
    if any(v not in (0, 1) for v in s):
        raise ValueError(f"mean-field sampler needs a 0/1 input, got {s}")
    occupied = [i for i, v in enumerate(s) if v]
    n = len(occupied)
    if n == 0:
        raise ValueError("mean-field sampler needs at least one photon")
    m = np.asarray(mat, dtype=np.complex128)
    num_modes = len(s)
    if m.shape != (num_modes, num_modes):
        raise ValueError(f"matrix shape {m.shape} does not match {num_modes} modes")
    sub = m[:, occupied]  # (N, n)
    rng = as_generator(seed)

    rows = []
    done = 0
    while done < count:
        block = min(CHUNK, count - done)
        if variant == "shared":
            theta = rng.uniform(0.0, 2.0 * math.pi, size=(block, n))
            fields = np.exp(1j * theta) @ sub.T  # (block, N)
            p = np.abs(fields) ** 2 / n
            p /= p.sum(axis=1, keepdims=True)
            u = rng.random((block, n))
            modes = _modes_from_cdf(p[:, None, :], u)
        else:
            theta = rng.uniform(0.0, 2.0 * math.pi, size=(block, n, n))
            fields = np.einsum("rpj,kj->rpk", np.exp(1j * theta), sub)
            p = np.abs(fields) ** 2 / n
            p /= p.sum(axis=2, keepdims=True)
            u = rng.random((block, n))
            modes = _modes_from_cdf(p, u)
        rows.append(_patterns_from_modes(modes, num_modes))
        done += block
    events = _rows_to_events(np.concatenate(rows))
    model = Model.MEANFIELD_SHARED if variant == "shared" else Model.MEANFIELD_INDEPENDENT
    return SampleBatch(model, s, matrix_id, _seed_value(seed), tuple(events))


def sample_coherent(
    mat, amplitudes, count: int, seed: SeedLike, matrix_id: str = ""
) -> SampleBatch:
    """Coherent-state sampler: fresh per-mode phases each run, Poissonian counts.

    Events carry their actual totals; photon number is not conserved run to
    run.  Use :func:`postselect` to keep a fixed total.
    """
    m = np.asarray(mat, dtype=np.complex128)
    alpha = np.asarray(amplitudes, dtype=np.float64)
    num_modes = m.shape[0]
    if m.shape != (num_modes, num_modes) or alpha.shape != (num_modes,):
        raise ValueError("amplitudes must match the matrix dimension")
    if np.any(alpha < 0):
        raise ValueError("amplitudes must be non-negative")
    rng = as_generator(seed)
    rows = []
    done = 0
    while done < count:
        block = min(CHUNK, count - done)
        chi = rng.uniform(0.0, 2.0 * math.pi, size=(block, num_modes))
        beta = (np.exp(1j * chi) * alpha) @ m.T  # beta[r, k] = sum_j e^{i chi_j} a_j m[k, j]
        rows.append(rng.poisson(np.abs(beta) ** 2))
        done += block
    events = _rows_to_events(np.concatenate(rows))
    return SampleBatch(
        Model.COHERENT, tuple(float(a) for a in alpha), matrix_id, _seed_value(seed), tuple(events)
    )


def sample_pd(
    mat,
    input_pattern,
    coefficients: OverlapCoefficients,
    count: int,
    seed: SeedLike,
    matrix_id: str = "",
    cap: int = DEFAULT_PATTERN_CAP,
) -> SampleBatch:
    """Categorical draws from the partially distinguishable output distribution."""
    s = validate_pattern(input_pattern)
    rng = as_generator(seed)
    dist = pd_output_distribution(mat, s, coefficients, cap)
    events = _categorical_batch(dist, count, rng)
    return SampleBatch(
        Model.PARTIALLY_DISTINGUISHABLE, s, matrix_id, _seed_value(seed), tuple(events)
    )


def sample(
    spec: SamplerSpec,
    mat,
    input_pattern,
    count: int,
    seed: SeedLike,
    variant_hint: str | None = None,
    matrix_id: str = "",
    cap: int = DEFAULT_PATTERN_CAP,
) -> SampleBatch:
    """Dispatch on a :class:`SamplerSpec`; the coherent model ignores ``input_pattern``."""
    model = spec.model
    if model is Model.BOSON:
        return sample_boson(mat, input_pattern, count, seed, matrix_id, cap)
    if model is Model.CLASSICAL:
        return sample_classical(mat, input_pattern, count, seed, matrix_id)
    if model is Model.MEANFIELD_SHARED:
        return sample_meanfield(mat, input_pattern, count, seed, "shared", matrix_id)
    if model is Model.MEANFIELD_INDEPENDENT:
        return sample_meanfield(mat, input_pattern, count, seed, "independent", matrix_id)
    if model is Model.COHERENT:
        return sample_coherent(mat, spec.amplitudes, count, seed, matrix_id)
    if model is Model.PARTIALLY_DISTINGUISHABLE:
        return sample_pd(mat, input_pattern, spec.coefficients, count, seed, matrix_id, cap)
    raise ValueError(f"unknown model {model!r}")


def postselect(batch: SampleBatch, total: int) -> SampleBatch:
    """Keep only events with the given photon total; record the retained fraction."""
    kept = tuple(e for e in batch.events if pattern_total(e) == total)
    fraction = len(kept) / len(batch.events) if batch.events else 0.0
    return replace(batch, events=kept, retained_fraction=fraction)
