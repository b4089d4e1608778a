"""Simulation and certification toolkit for linear-optical sampling devices.

Computes exact output distributions and draws samples for boson, classical
(distinguishable-photon), mean-field, coherent-state, and partially
distinguishable sampling through an N-mode interferometer, and certifies a
black-box sampler against the mean-field imposter via the all-modes-occupied
test state.
"""

__version__ = "0.1.0"

from .certification import (
    CertificationReport,
    CountTable,
    certify_against_meanfield,
    chi_square_upper_tail,
    chi_square_vs_reference,
    most_frequent_event_test,
    spread_statistic,
    tally,
    tvd,
)
from .distinguishability import (
    ExtendedTerm,
    OverlapCoefficients,
    distinguishable_coefficients,
    expand_input,
    indistinguishable_coefficients,
    pd_output_distribution,
    uniform_overlap_coefficients,
)
from .linalg import haar_unitary, is_unitary, permanent, permanent_oracle
from .models import (
    Model,
    boson_distribution,
    boson_probability,
    classical_distribution,
    classical_probability,
    coherent_average_probability,
    coherent_distribution,
    coherent_probability_given_phases,
    coherent_shared_average_probability,
    exact_distribution,
    meanfield_average_probability,
    meanfield_independent_distribution,
    meanfield_probability_given_phases,
    meanfield_shared_average_probability,
    meanfield_shared_distribution,
    meanfield_test_state_distribution,
    meanfield_test_state_probability,
    scattering_submatrix,
)
from .patterns import (
    arrangement_to_pattern,
    enumerate_patterns,
    pattern_count,
    pattern_to_arrangement,
)
from .rng import derive_rng
from .sampling import (
    SampleBatch,
    SamplerSpec,
    postselect,
    sample,
    sample_boson,
    sample_classical,
    sample_coherent,
    sample_meanfield,
    sample_pd,
)

__all__ = [
    "CertificationReport",
    "CountTable",
    "ExtendedTerm",
    "Model",
    "OverlapCoefficients",
    "SampleBatch",
    "SamplerSpec",
    "arrangement_to_pattern",
    "boson_distribution",
    "boson_probability",
    "certify_against_meanfield",
    "chi_square_upper_tail",
    "chi_square_vs_reference",
    "classical_distribution",
    "classical_probability",
    "coherent_average_probability",
    "coherent_distribution",
    "coherent_probability_given_phases",
    "coherent_shared_average_probability",
    "derive_rng",
    "distinguishable_coefficients",
    "enumerate_patterns",
    "exact_distribution",
    "expand_input",
    "haar_unitary",
    "indistinguishable_coefficients",
    "is_unitary",
    "meanfield_average_probability",
    "meanfield_independent_distribution",
    "meanfield_probability_given_phases",
    "meanfield_shared_average_probability",
    "meanfield_shared_distribution",
    "meanfield_test_state_distribution",
    "meanfield_test_state_probability",
    "most_frequent_event_test",
    "pattern_count",
    "pattern_to_arrangement",
    "pd_output_distribution",
    "permanent",
    "permanent_oracle",
    "postselect",
    "sample",
    "sample_boson",
    "sample_classical",
    "sample_coherent",
    "sample_meanfield",
    "sample_pd",
    "scattering_submatrix",
    "spread_statistic",
    "tally",
    "tvd",
    "uniform_overlap_coefficients",
]
