"""Partially distinguishable photons via orthogonal temporal modes.

Photons that do not arrive simultaneously overlap only partially.  Photon 1
defines the reference temporal mode; each later photon r is expanded over an
orthonormal temporal basis t_1..t_r with complex coefficients C_{r,1..r}
(Gram-Schmidt: the component along every earlier photon plus one orthogonal
remainder).  Expanding the product of creation operators turns the input into
a coherent sum of n! extended Fock terms, each placing every photon in a
definite (spatial, temporal) mode.  The interferometer acts on spatial labels
only; photon counters are blind to temporal labels, so the observed
distribution marginalizes the extended output over temporal patterns.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .linalg import permanent
from .patterns import (
    DEFAULT_PATTERN_CAP,
    Pattern,
    enumerate_patterns,
    pattern_to_arrangement,
    pattern_total,
    validate_pattern,
)

NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class OverlapCoefficients:
    """Temporal expansion coefficients, one row per photon from the second on.

    ``rows[i]`` describes photon r = i + 2 and has length r; row entries are
    complex and each row has unit norm.  Photon 1 carries no row (it defines
    the reference temporal mode).
    """

    rows: tuple[tuple[complex, ...], ...]

    def __post_init__(self) -> None:
        for i, row in enumerate(self.rows):
            r = i + 2
            if len(row) != r:
                raise ValueError(f"row for photon {r} must have {r} entries, got {len(row)}")
            norm = sum(abs(c) ** 2 for c in row)
            if abs(norm - 1.0) > NORMALIZATION_TOL:
                raise ValueError(f"row for photon {r} has squared norm {norm}, expected 1")

    @property
    def photons(self) -> int:
        return len(self.rows) + 1

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[complex]]) -> "OverlapCoefficients":
        return cls(tuple(tuple(complex(c) for c in row) for row in rows))


class ExtendedTerm(NamedTuple):
    """One Fock term of the expanded input state.

    ``assignment[r-1]`` is the (1-based) temporal label of photon r, with
    photon 1 pinned to label 1; ``amplitude`` is the product of the selected
    coefficients.
    """

    amplitude: complex
    assignment: tuple[int, ...]


def uniform_overlap_coefficients(n: int) -> OverlapCoefficients:
    """Coefficients C_{r,k} = 1/sqrt(r), which weight all n! terms equally.

    Every extended term then carries amplitude 1/sqrt(n!).  For two photons
    this means a 50% chance of finding the pair indistinguishable.
    """
    if n < 1:
        raise ValueError("need at least one photon")
    return OverlapCoefficients.from_rows(
        [[1.0 / math.sqrt(r)] * r for r in range(2, n + 1)]
    )


def indistinguishable_coefficients(n: int) -> OverlapCoefficients:
    """All photons in the reference temporal mode (standard boson limit)."""
    if n < 1:
        raise ValueError("need at least one photon")
    return OverlapCoefficients.from_rows(
        [[1.0] + [0.0] * (r - 1) for r in range(2, n + 1)]
    )


def distinguishable_coefficients(n: int) -> OverlapCoefficients:
    """Every photon in its own orthogonal temporal mode (classical limit)."""
    if n < 1:
        raise ValueError("need at least one photon")
    return OverlapCoefficients.from_rows(
        [[0.0] * (r - 1) + [1.0] for r in range(2, n + 1)]
    )


def expand_input(coefficients: OverlapCoefficients) -> list[ExtendedTerm]:
    """All temporal-label assignments with their amplitudes.

    Photon r ranges over labels 1..r, so there are prod_{r=2}^n r = n! terms;
    their squared amplitudes sum to 1 because every coefficient row does.
    """
    n = coefficients.photons
    terms: list[ExtendedTerm] = []
    choices = [range(1, r + 1) for r in range(2, n + 1)]
    for labels in itertools.product(*choices):
        amp = 1 + 0j
        for row, k in zip(coefficients.rows, labels):
            amp *= row[k - 1]
        terms.append(ExtendedTerm(amp, (1,) + labels))
    return terms


def pd_output_distribution(
    mat,
    input_pattern,
    coefficients: OverlapCoefficients,
    cap: int = DEFAULT_PATTERN_CAP,
):
    """Spatial output distribution for partially distinguishable photons.

    Works in the extended (spatial x temporal) mode space: the scattering
    matrix acts as ``mat`` on spatial indices and as the identity on temporal
    indices.  For each extended output basis state the amplitude is the
    coefficient-weighted sum over input terms of perm(A)/sqrt(prod g!), with
    A the extended scattering submatrix and g the extended output multiplici-
    ties; squared amplitudes are then summed over temporal patterns.

    Only single-photon inputs are supported (entries 0/1), matching the
    Gram-Schmidt construction of one temporal row per photon.
    """
    s = validate_pattern(input_pattern)
    n = pattern_total(s)
    if any(v not in (0, 1) for v in s):
        raise ValueError(f"partial distinguishability needs a 0/1 input, got {s}")
    if coefficients.photons != n:
        raise ValueError(
            f"coefficients describe {coefficients.photons} photons, input has {n}"
        )
    num_modes = len(s)
    m = np.asarray(mat, dtype=np.complex128)
    if m.shape != (num_modes, num_modes):
        raise ValueError(f"interferometer shape {m.shape} does not match {num_modes} modes")

    spatial_in = [j - 1 for j in pattern_to_arrangement(s)]  # 0-based, one per photon
    terms = [t for t in expand_input(coefficients) if t.amplitude != 0]
    # photon p of term i sits in extended mode (spatial_in[p], assignment[p])
    term_labels = [t.assignment for t in terms]
    term_amps = [t.amplitude for t in terms]
    term_label_counts = [_label_multiset(labels) for labels in term_labels]

    out: dict[Pattern, float] = {
        t: 0.0 for t in enumerate_patterns(n, num_modes, cap)
    }
    # extended modes indexed (spatial k, temporal m) -> k * n + (m - 1)
    for ext_pattern in enumerate_patterns(n, num_modes * n, cap):
        ext_arrangement = pattern_to_arrangement(ext_pattern)
        out_spatial = [(e - 1) // n for e in ext_arrangement]
        out_temporal = [(e - 1) % n + 1 for e in ext_arrangement]
        out_label_counts = _label_multiset(out_temporal)
        sqrt_g = math.sqrt(_multiplicity_factorial(ext_pattern))
        amp = 0 + 0j
        for amp_in, labels, label_counts in zip(term_amps, term_labels, term_label_counts):
            # temporal labels are conserved; skip terms whose multiset differs
            if label_counts != out_label_counts:
                continue
            a = np.zeros((n, n), dtype=np.complex128)
            for q in range(n):
                for p in range(n):
                    if out_temporal[q] == labels[p]:
                        a[q, p] = m[out_spatial[q], spatial_in[p]]
            amp += amp_in * permanent(a)
        if amp != 0:
            spatial = [0] * num_modes
            for k in out_spatial:
                spatial[k] += 1
            out[tuple(spatial)] += abs(amp / sqrt_g) ** 2
    return out


def _label_multiset(labels: Sequence[int]) -> tuple[int, ...]:
    counts = [0] * (max(labels) if labels else 0)
    for v in labels:
        counts[v - 1] += 1
    return tuple(counts)


def _multiplicity_factorial(pattern: Pattern) -> int:
    prod = 1
    for v in pattern:
        prod *= math.factorial(v)
    return prod
