"""Exact single-event probabilities and full output distributions.

Five device models share one vocabulary: an N-mode interferometer matrix, an
input (occupation pattern, or field amplitudes for the coherent model), and an
output occupation pattern.

* ``boson``: indistinguishable photons; amplitude is a matrix permanent.
* ``classical``: distinguishable photons routed independently.
* ``meanfield-shared`` / ``meanfield-independent``: single photons prepared in
  an equal-weight superposition over the occupied input modes with random
  phases, injected one per shot.  The two variants differ in when the phases
  are redrawn (once per n-photon run vs. fresh for every photon); they have
  different exact phase-averaged distributions.
* ``coherent``: laser light with randomized per-mode phases; the output is a
  product of Poissonian modes with indefinite total photon number.
"""

from __future__ import annotations

import itertools
import math
from enum import Enum

import numpy as np

from .linalg import permanent
from .patterns import (
    DEFAULT_PATTERN_CAP,
    Pattern,
    enumerate_patterns,
    factorial_product,
    pattern_to_arrangement,
    pattern_total,
    validate_pattern,
)

#: Stop the coherent-model enumeration once the per-total Poisson tail
#: probability falls below this.
COHERENT_TAIL_BOUND = 1e-10


class Model(str, Enum):
    """Device model tags, as used by the samplers and the CLI."""

    BOSON = "boson"
    CLASSICAL = "classical"
    MEANFIELD_SHARED = "meanfield-shared"
    MEANFIELD_INDEPENDENT = "meanfield-independent"
    COHERENT = "coherent"
    PARTIALLY_DISTINGUISHABLE = "pd"

    def __str__(self) -> str:  # argparse-friendly
        return self.value


def _as_interferometer(mat, num_modes: int | None = None) -> np.ndarray:
    m = np.asarray(mat, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"interferometer must be square, got shape {m.shape}")
    if num_modes is not None and m.shape[0] != num_modes:
        raise ValueError(
            f"interferometer has {m.shape[0]} modes, patterns have {num_modes}"
        )
    return m


def _check_io(mat, input_pattern, output_pattern) -> tuple[np.ndarray, Pattern, Pattern]:
    s = validate_pattern(input_pattern)
    t = validate_pattern(output_pattern)
    if len(s) != len(t):
        raise ValueError(f"mode counts differ: input {len(s)}, output {len(t)}")
    if pattern_total(s) != pattern_total(t):
        raise ValueError(
            f"photon totals differ: input {pattern_total(s)}, output {pattern_total(t)}"
        )
    m = _as_interferometer(mat, len(s))
    return m, s, t


def _single_photon_modes(pattern: Pattern) -> list[int]:
    """0-based occupied mode indices for a 0/1 pattern; rejects multi-photon entries."""
    if any(v not in (0, 1) for v in pattern):
        raise ValueError(
            f"model requires at most one photon per input mode, got {pattern}"
        )
    return [i for i, v in enumerate(pattern) if v == 1]


def scattering_submatrix(mat, input_pattern, output_pattern) -> np.ndarray:
    """n x n submatrix with rows from the output arrangement, columns from the input.

    Entry (q, p) is ``mat[k_q - 1, j_p - 1]`` where k and j are the 1-based
    output and input mode arrangements.  Repeated occupations repeat rows or
    columns accordingly.
    """
    m, s, t = _check_io(mat, input_pattern, output_pattern)
    rows = [k - 1 for k in pattern_to_arrangement(t)]
    cols = [j - 1 for j in pattern_to_arrangement(s)]
    return m[np.ix_(rows, cols)]


def boson_probability(mat, input_pattern, output_pattern) -> float:
    """Probability of the output event for indistinguishable photons.

    |perm(A)|^2 / (prod_i s_i! t_i!) with A the scattering submatrix.
    """
    a = scattering_submatrix(mat, input_pattern, output_pattern)
    norm = factorial_product(input_pattern) * factorial_product(output_pattern)
    return abs(permanent(a)) ** 2 / norm


def classical_probability(mat, input_pattern, output_pattern) -> float:
    """Probability of the output event for fully distinguishable photons.

    perm(W) / prod_i t_i! where W is the entrywise |A|^2 of the scattering
    submatrix.  This equals the independent per-photon routing model exactly:
    photon p entering mode j_p lands in mode k with probability
    |mat[k, j_p]|^2, and each routing outcome is counted prod t_i! times by
    the permanent (once per permutation of identical output rows).  Input
    factorials do not appear because distinguishable photons are labelled;
    a square-rooted denominator would not even normalize (balanced
    beamsplitter, two photons: the event masses would sum above 1).
    """
    a = scattering_submatrix(mat, input_pattern, output_pattern)
    w = np.abs(a) ** 2
    return permanent(w).real / factorial_product(output_pattern)


def _meanfield_prefactor(n: int, output_pattern: Pattern) -> float:
    return math.factorial(n) / (n**n * factorial_product(output_pattern))


def meanfield_probability_given_phases(
    mat, input_pattern, output_pattern, phases
) -> float:
    """Mean-field output probability for one concrete phase vector.

    (n!/(n^n prod t_l!)) * prod_q |sum_p e^{i theta_p} mat[k_q, j_p]|^2 —
    a multinomial over per-photon mode probabilities
    p_k = (1/n)|sum_p e^{i theta_p} mat[k, j_p]|^2.

    The input must have at most one photon per mode; with repeated input
    modes the superposed single-photon state is not normalized and the
    event masses would not sum to 1.
    """
    m, s, t = _check_io(mat, input_pattern, output_pattern)
    occupied = _single_photon_modes(s)
    n = len(occupied)
    if n == 0:
        raise ValueError("mean-field model needs at least one photon")
    theta = np.asarray(phases, dtype=np.float64)
    if theta.shape != (n,):
        raise ValueError(f"need {n} phases, got shape {theta.shape}")
    sub = m[:, occupied]  # (N, n)
    field = sub @ np.exp(1j * theta)  # per-output-mode amplitude sums
    rows = [k - 1 for k in pattern_to_arrangement(t)]
    return _meanfield_prefactor(n, t) * float(np.prod(np.abs(field[rows]) ** 2))


def meanfield_average_probability(mat, input_pattern, output_pattern) -> float:
    """Product-of-averages form of the mean-field distribution.

    (n!/(n^n prod t_l!)) * prod_q sum_p |mat[k_q, j_p]|^2.  This is the exact
    phase average of the *independent* variant, where every photon gets fresh
    phases: the per-photon mode distribution is then
    p_k = (1/n) sum_p |mat[k, j_p]|^2 and runs are plain multinomials.  For
    phases shared within a run the true average differs; see
    :func:`meanfield_shared_average_probability`.
    """
    m, s, t = _check_io(mat, input_pattern, output_pattern)
    occupied = _single_photon_modes(s)
    n = len(occupied)
    if n == 0:
        raise ValueError("mean-field model needs at least one photon")
    weights = np.abs(m[:, occupied]) ** 2
    row_mass = weights.sum(axis=1)  # sum_p |mat[k, j_p]|^2 per output mode k
    rows = [k - 1 for k in pattern_to_arrangement(t)]
    return _meanfield_prefactor(n, t) * float(np.prod(row_mass[rows]))


def _shared_phase_grid(n: int) -> np.ndarray:
    """Phase vectors whose uniform average integrates the shared-phase model exactly.

    The run probability is a trigonometric polynomial of degree at most n in
    each phase, and a global phase shift cancels, so fixing theta_1 = 0 and
    averaging the remaining n-1 phases over a uniform grid of 2n+1 points per
    axis reproduces the integral exactly (rectangle rule on the torus is
    exact below the grid's Nyquist order).
    """
    points = 2 * n + 1
    axis = 2.0 * math.pi * np.arange(points) / points
    grids = np.meshgrid(*([axis] * (n - 1)), indexing="ij") if n > 1 else []
    flat = [g.ravel() for g in grids]
    out = np.zeros((flat[0].size if flat else 1, n))
    for i, g in enumerate(flat):
        out[:, i + 1] = g
    return out


def meanfield_shared_average_probability(mat, input_pattern, output_pattern) -> float:
    """Exact phase average of the shared-phase mean-field variant.

    Averages :func:`meanfield_probability_given_phases` over the phase torus
    with a grid rule that is exact for the integrand (see
    :func:`_shared_phase_grid`).  Unlike the product-of-averages form this
    generally depends on the interferometer even for the test state, and the
    two disagree already for a balanced beamsplitter with one photon in each
    arm: shared phases give event masses (3/8, 1/4, 3/8) versus
    (1/4, 1/2, 1/4) for independent phases.
    """
    m, s, t = _check_io(mat, input_pattern, output_pattern)
    occupied = _single_photon_modes(s)
    n = len(occupied)
    if n == 0:
        raise ValueError("mean-field model needs at least one photon")
    sub = m[:, occupied]
    rows = [k - 1 for k in pattern_to_arrangement(t)]
    pref = _meanfield_prefactor(n, t)
    grid = _shared_phase_grid(n)
    fields = np.exp(1j * grid) @ sub.T  # (grid, N)
    vals = np.prod(np.abs(fields[:, rows]) ** 2, axis=1)
    return pref * float(vals.mean())


def meanfield_test_state_probability(n: int, output_pattern) -> float:
    """Closed-form mean-field event mass under the all-modes-occupied test state.

    With one photon in every one of n = N modes and independent phases, the
    averaged distribution collapses to n!/(n^n prod_k t_k!): the
    interferometer drops out entirely because each per-photon factor is a
    full row mass of a unitary matrix.  This is the certification null.
    """
    t = validate_pattern(output_pattern)
    if len(t) != n:
        raise ValueError(f"test state has as many modes as photons; got N={len(t)}, n={n}")
    if pattern_total(t) != n:
        raise ValueError(f"output total {pattern_total(t)} != photon number {n}")
    return math.factorial(n) / (n**n * factorial_product(t))


def _coherent_check(mat, amplitudes) -> tuple[np.ndarray, np.ndarray]:
    m = _as_interferometer(mat)
    alpha = np.asarray(amplitudes, dtype=np.float64)
    if alpha.ndim != 1 or alpha.shape[0] != m.shape[0]:
        raise ValueError(
            f"need one amplitude per mode ({m.shape[0]}), got shape {alpha.shape}"
        )
    if np.any(alpha < 0) or not np.all(np.isfinite(alpha)):
        raise ValueError("amplitudes must be finite and non-negative")
    return m, alpha


def coherent_probability_given_phases(mat, amplitudes, phases, output_pattern) -> float:
    """Coherent-model probability of a Fock output for one phase draw.

    beta_k = sum_j e^{i chi_j} alpha_j mat[k, j];
    P(T) = exp(-sum_k |beta_k|^2) prod_k |beta_k|^{2 t_k} / t_k!.
    The output total is unconstrained (coherent light has indefinite photon
    number); for unitary matrices sum_k |beta_k|^2 equals sum_j alpha_j^2.
    """
    m, alpha = _coherent_check(mat, amplitudes)
    chi = np.asarray(phases, dtype=np.float64)
    if chi.shape != alpha.shape:
        raise ValueError(f"need {alpha.shape[0]} phases, got shape {chi.shape}")
    t = validate_pattern(output_pattern)
    if len(t) != m.shape[0]:
        raise ValueError(f"output covers {len(t)} modes, interferometer has {m.shape[0]}")
    beta = m @ (alpha * np.exp(1j * chi))
    mean = np.abs(beta) ** 2
    return _poisson_product(mean, t)


def coherent_average_probability(mat, amplitudes, output_pattern) -> float:
    """Phase-averaged coherent-model probability of a Fock output.

    Averaging over independent uniform per-mode phases leaves a product of
    Poisson laws with means mu_k = sum_j |alpha_j mat[k, j]|^2.  Exact when
    the phases are regenerated independently per mode; for a single shared
    laser phase the cross terms do not vanish and this is an approximation.
    """
    m, alpha = _coherent_check(mat, amplitudes)
    t = validate_pattern(output_pattern)
    if len(t) != m.shape[0]:
        raise ValueError(f"output covers {len(t)} modes, interferometer has {m.shape[0]}")
    mean = (np.abs(m) ** 2) @ (alpha**2)
    return _poisson_product(mean, t)


def _poisson_product(mean: np.ndarray, pattern: Pattern) -> float:
    log_p = -float(mean.sum())
    for mu, t in zip(mean, pattern):
        if t:
            if mu == 0.0:
                return 0.0
            log_p += t * math.log(mu) - math.lgamma(t + 1)
    return math.exp(log_p)


def coherent_shared_average_probability(mat, amplitudes, output_pattern) -> float:
    """Exact phase average of the shared-phase coherent sampler.

    The operational sampler draws one phase vector per run, so the output
    modes stay correlated through the common phases and the product-of-
    averages form of :func:`coherent_average_probability` is only an
    approximation.  This evaluates the true average on a uniform phase grid,
    which is exact for unitary matrices: the vacuum factor is then constant
    and the rest is a trigonometric polynomial of degree at most the photon
    total in each phase.
    """
    m, alpha = _coherent_check(mat, amplitudes)
    t = validate_pattern(output_pattern)
    if len(t) != m.shape[0]:
        raise ValueError(f"output covers {len(t)} modes, interferometer has {m.shape[0]}")
    total = pattern_total(t)
    points = 2 * total + 1
    axis = 2.0 * math.pi * np.arange(points) / points
    acc = 0.0
    count = 0
    # chi_1 pinned to 0: a global phase cancels in every |beta_k|
    for rest in itertools.product(axis, repeat=m.shape[0] - 1):
        chi = np.concatenate(([0.0], rest))
        beta = m @ (alpha * np.exp(1j * chi))
        acc += _poisson_product(np.abs(beta) ** 2, t)
        count += 1
    return acc / count


# ---------------------------------------------------------------------------
# Full distributions
# ---------------------------------------------------------------------------


def boson_distribution(mat, input_pattern, cap: int = DEFAULT_PATTERN_CAP):
    """Map from every output pattern to its boson-model probability."""
    s = validate_pattern(input_pattern)
    pats = enumerate_patterns(pattern_total(s), len(s), cap)
    return {t: boson_probability(mat, s, t) for t in pats}


def classical_distribution(mat, input_pattern, cap: int = DEFAULT_PATTERN_CAP):
    s = validate_pattern(input_pattern)
    pats = enumerate_patterns(pattern_total(s), len(s), cap)
    return {t: classical_probability(mat, s, t) for t in pats}


def meanfield_given_phases_distribution(
    mat, input_pattern, phases, cap: int = DEFAULT_PATTERN_CAP
):
    s = validate_pattern(input_pattern)
    pats = enumerate_patterns(pattern_total(s), len(s), cap)
    return {t: meanfield_probability_given_phases(mat, s, t, phases) for t in pats}


def meanfield_independent_distribution(
    mat, input_pattern, cap: int = DEFAULT_PATTERN_CAP
):
    s = validate_pattern(input_pattern)
    pats = enumerate_patterns(pattern_total(s), len(s), cap)
    return {t: meanfield_average_probability(mat, s, t) for t in pats}


def meanfield_shared_distribution(mat, input_pattern, cap: int = DEFAULT_PATTERN_CAP):
    s = validate_pattern(input_pattern)
    pats = enumerate_patterns(pattern_total(s), len(s), cap)
    return {t: meanfield_shared_average_probability(mat, s, t) for t in pats}


def meanfield_test_state_distribution(n: int, cap: int = DEFAULT_PATTERN_CAP):
    """The certification null: test-state mean-field masses over all events."""
    return {t: meanfield_test_state_probability(n, t) for t in enumerate_patterns(n, n, cap)}


def coherent_distribution(
    mat,
    amplitudes,
    tail_bound: float = COHERENT_TAIL_BOUND,
    cap: int = DEFAULT_PATTERN_CAP,
):
    """Phase-averaged coherent distribution, truncated in total photon number.

    Enumerates output totals 0, 1, 2, ... until the Poisson tail of the total
    photon number drops below ``tail_bound``.  Returns ``(probs, tail)`` where
    ``tail`` is the probability mass beyond the truncation; the enumerated
    masses sum to 1 - tail up to roundoff.
    """
    m, alpha = _coherent_check(mat, amplitudes)
    num_modes = m.shape[0]
    mean = (np.abs(m) ** 2) @ (alpha**2)
    mu = float(mean.sum())
    # find the smallest cutoff with Poisson(mu) tail below the bound
    term = math.exp(-mu)
    cdf = term
    cutoff = 0
    while 1.0 - cdf > tail_bound and cutoff < 10_000:
        cutoff += 1
        term *= mu / cutoff
        cdf += term
    total_count = sum(
        math.comb(num_modes + k - 1, k) for k in range(cutoff + 1)
    )
    if total_count > cap:
        raise ValueError(f"{total_count} coherent patterns exceeds cap {cap}")
    probs: dict[Pattern, float] = {}
    for k in range(cutoff + 1):
        for t in enumerate_patterns(k, num_modes, cap):
            probs[t] = _poisson_product(mean, t)
    return probs, max(0.0, 1.0 - cdf)


def exact_distribution(
    model: Model,
    mat,
    input_state,
    *,
    coefficients=None,
    phases=None,
    cap: int = DEFAULT_PATTERN_CAP,
    tail_bound: float = COHERENT_TAIL_BOUND,
):
    """Dispatch to the exact output distribution of the given model.

    ``input_state`` is an occupation pattern for the Fock-input models and a
    vector of field amplitudes for the coherent model.  ``coefficients``
    (temporal-overlap description) is required for, and only accepted by, the
    partially distinguishable model; ``phases`` only by the fixed-phase
    mean-field evaluation.  The coherent result drops the truncation tail
    (use :func:`coherent_distribution` directly to get the bound).
    """
    model = Model(model)
    if coefficients is not None and model is not Model.PARTIALLY_DISTINGUISHABLE:
        raise ValueError(f"overlap coefficients are not a parameter of {model}")
    if phases is not None and model not in (
        Model.MEANFIELD_SHARED,
        Model.MEANFIELD_INDEPENDENT,
    ):
        raise ValueError(f"fixed phases are not a parameter of {model}")
    if model is Model.BOSON:
        return boson_distribution(mat, input_state, cap)
    if model is Model.CLASSICAL:
        return classical_distribution(mat, input_state, cap)
    if model is Model.MEANFIELD_SHARED:
        if phases is not None:
            return meanfield_given_phases_distribution(mat, input_state, phases, cap)
        return meanfield_shared_distribution(mat, input_state, cap)
    if model is Model.MEANFIELD_INDEPENDENT:
        if phases is not None:
            return meanfield_given_phases_distribution(mat, input_state, phases, cap)
        return meanfield_independent_distribution(mat, input_state, cap)
    if model is Model.COHERENT:
        probs, _ = coherent_distribution(mat, input_state, tail_bound, cap)
        return probs
    if model is Model.PARTIALLY_DISTINGUISHABLE:
        from .distinguishability import pd_output_distribution

        if coefficients is None:
            raise ValueError("partially distinguishable model needs overlap coefficients")
        return pd_output_distribution(mat, input_state, coefficients, cap)
    raise ValueError(f"unknown model {model!r}")


def coincidence_mass(distribution) -> float:
    """Total probability of collision-free events (no mode above one photon)."""
    return sum(p for t, p in distribution.items() if max(t) <= 1)


def distribution_support_check(distribution, tol: float = 1e-9) -> float:
    """Sum of the distribution's masses; raises if further than ``tol`` from 1."""
    total = float(sum(distribution.values()))
    if abs(total - 1.0) > tol:
        raise ValueError(f"distribution sums to {total}, expected 1 within {tol}")
    return total
