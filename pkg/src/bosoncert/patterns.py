"""Occupation patterns, mode arrangements, and configuration enumeration.

A pattern is a tuple of non-negative photon counts per mode, e.g. ``(0, 2, 1)``
for two photons in mode 2 and one in mode 3.  The equivalent arrangement lists
the occupied mode indices (1-based) once per photon, non-decreasing:
``(2, 2, 3)``.  The two encodings are bijective and both used throughout.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

#: Refuse to enumerate configuration spaces larger than this.
DEFAULT_PATTERN_CAP = 10_000_000

Pattern = tuple[int, ...]
Arrangement = tuple[int, ...]


def validate_pattern(pattern: Sequence[int]) -> Pattern:
    """Normalize to a tuple and check non-negative integer entries."""
    pat = tuple(int(v) for v in pattern)
    if len(pat) < 1:
        raise ValueError("pattern must cover at least one mode")
    if any(v != w for v, w in zip(pat, pattern)) or any(v < 0 for v in pat):
        raise ValueError(f"pattern entries must be non-negative integers: {tuple(pattern)}")
    return pat


def pattern_total(pattern: Sequence[int]) -> int:
    return int(sum(pattern))


def pattern_to_arrangement(pattern: Sequence[int]) -> Arrangement:
    """Mode index j (1-based) repeated ``pattern[j-1]`` times, non-decreasing."""
    pat = validate_pattern(pattern)
    out: list[int] = []
    for mode, count in enumerate(pat, start=1):
        out.extend([mode] * count)
    return tuple(out)


def arrangement_to_pattern(arrangement: Sequence[int], num_modes: int) -> Pattern:
    """Inverse of :func:`pattern_to_arrangement` for a given mode count."""
    if num_modes < 1:
        raise ValueError("num_modes must be >= 1")
    counts = [0] * num_modes
    for mode in arrangement:
        if not 1 <= mode <= num_modes:
            raise ValueError(f"mode index {mode} outside 1..{num_modes}")
        counts[mode - 1] += 1
    return tuple(counts)


def pattern_count(total: int, num_modes: int) -> int:
    """Number of patterns with ``total`` photons over ``num_modes`` modes."""
    if total < 0 or num_modes < 1:
        raise ValueError("need total >= 0 and num_modes >= 1")
    return math.comb(num_modes + total - 1, total)


def enumerate_patterns(
    total: int, num_modes: int, cap: int = DEFAULT_PATTERN_CAP
) -> list[Pattern]:
    """All occupation patterns with the given photon total, lexicographic.

    The count is C(num_modes + total - 1, total); enumeration is refused when
    it exceeds ``cap`` so a typo cannot silently allocate gigabytes.
    """
    count = pattern_count(total, num_modes)
    if count > cap:
        raise ValueError(
            f"{count} patterns for n={total}, N={num_modes} exceeds cap {cap}"
        )
    return list(_iter_patterns(total, num_modes))


def _iter_patterns(total: int, num_modes: int) -> Iterable[Pattern]:
    if num_modes == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _iter_patterns(total - head, num_modes - 1):
            yield (head,) + rest


def factorial_product(pattern: Sequence[int]) -> int:
    """Product of factorials of the entries, as an exact integer."""
    prod = 1
    for v in pattern:
        prod *= math.factorial(int(v))
    return prod
