"""Complex linear-algebra kernels: matrix permanents and Haar-random unitaries.

The permanent is the computational core of the whole package; everything that
looks like an interference probability eventually calls it.  Two independent
evaluation routes are kept on purpose: the production Ryser/Gray-code kernel
and a factorial-time permutation sum used only for cross-checking.
"""

from __future__ import annotations

import math
from itertools import permutations

import numpy as np

from .rng import SeedLike, as_generator

#: Maximum deviation of max|U†U - I| tolerated when validating unitarity.
UNITARY_TOL = 1e-10

#: Dimension guard for the factorial-time permanent oracle.
ORACLE_MAX_DIM = 9


def _as_square(mat) -> np.ndarray:
    m = np.asarray(mat, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def permanent(mat) -> complex:
    """Permanent of a square complex matrix via Ryser's formula.

    Column subsets are visited in Gray-code order so each step updates the
    running row sums with a single column add or subtract, giving
    O(2^n * n) arithmetic.  Dimensions up to 3 are expanded directly.
    The permanent of a 0x0 matrix is 1 (empty product convention).

    Parameters
    ----------
    mat : array_like
        Square matrix, any dtype coercible to complex128.

    Returns
    -------
    complex
    """
    m = _as_square(mat)
    n = m.shape[0]
    if n == 0:
        return 1 + 0j
    if n == 1:
        return complex(m[0, 0])
    if n == 2:
        return complex(m[0, 0] * m[1, 1] + m[0, 1] * m[1, 0])
    if n == 3:
        return complex(
            m[0, 0] * (m[1, 1] * m[2, 2] + m[1, 2] * m[2, 1])
            + m[0, 1] * (m[1, 0] * m[2, 2] + m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] + m[1, 1] * m[2, 0])
        )

    # perm(A) = (-1)^n sum_{S subseteq [n], S nonempty} (-1)^|S| prod_i sum_{j in S} A[i, j]
    row_sums = np.zeros(n, dtype=np.complex128)
    total = 0 + 0j
    gray = 0
    for k in range(1, 1 << n):
        new_gray = k ^ (k >> 1)
        changed = gray ^ new_gray
        j = changed.bit_length() - 1
        if new_gray & changed:
            row_sums += m[:, j]
        else:
            row_sums -= m[:, j]
        term = np.prod(row_sums)
        if (n - new_gray.bit_count()) % 2 == 0:
            total += term
        else:
            total -= term
        gray = new_gray
    return complex(total)


def permanent_oracle(mat) -> complex:
    """Permanent by explicit summation over all n! permutations.

    Deliberately naive and kept independent of :func:`permanent`; used to
    verify the Ryser kernel.  Refuses matrices larger than
    ``ORACLE_MAX_DIM`` because the cost is n!.
    """
    m = _as_square(mat)
    n = m.shape[0]
    if n > ORACLE_MAX_DIM:
        raise ValueError(f"oracle limited to dimension {ORACLE_MAX_DIM}, got {n}")
    if n == 0:
        return 1 + 0j
    rows = [[complex(v) for v in row] for row in m]
    total = 0 + 0j
    for sigma in permutations(range(n)):
        prod = 1 + 0j
        for i, j in enumerate(sigma):
            prod *= rows[i][j]
        total += prod
    return total


def haar_unitary(dim: int, seed: SeedLike) -> np.ndarray:
    """Draw a dim x dim unitary from the Haar measure.

    A Ginibre matrix (i.i.d. standard complex Gaussians) is QR-decomposed and
    the phases of the triangular factor's diagonal are absorbed into Q.
    Without that gauge fix the QR output is *not* Haar distributed: numpy's QR
    has an arbitrary sign/phase convention that biases the ensemble.

    Parameters
    ----------
    dim : int
        Matrix dimension, at least 1.
    seed : int | SeedSequence | Generator
        Stream to draw from; an integer seeds a fresh PCG64 stream.
    """
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    rng = as_generator(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    z /= math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    # d is almost surely nonzero; normalizing it to positive reals fixes the gauge
    return q * (d / np.abs(d))


def is_unitary(mat, tol: float = UNITARY_TOL) -> bool:
    """True iff ``mat`` is square and max|M†M - I| <= tol.

    Non-square input returns False rather than raising.
    """
    m = np.asarray(mat, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    if m.size == 0:
        return True
    if not np.all(np.isfinite(m)):
        return False
    gram = m.conj().T @ m
    return bool(np.max(np.abs(gram - np.eye(m.shape[0]))) <= tol)
