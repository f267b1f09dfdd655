"""Sparse heavy-tailed random matrices: sampling, extreme spectra, and the
localization / delocalization phase transition.

Entries have symmetric regularly varying tails with exponent ``alpha`` and the
Bernoulli mask keeps each entry with probability ``n^(mu-1)``.  Below the
critical line ``alpha = 2 (1 + 1/mu)`` the largest eigenvalues follow the
largest entries (Poisson statistics, localized eigenvectors); above it they
stick to the Marchenko-Pastur edge (delocalized eigenvectors).  The package
samples these ensembles reproducibly, computes extreme eigenpairs by dense
factorization or Lanczos iteration, and verifies both the exact algebraic
invariants and the distributional limits behind that picture.
"""

from .seeding import mix64
from .tails import (
    BAND,
    BERNOULLI,
    FIXED_COUNT,
    HERMITIAN,
    RECTANGULAR,
    SV_CONSTANT,
    SV_LOG_POWER,
    EnsembleSpec,
    SparsitySpec,
    TailLaw,
    sample_entries,
    sample_entry,
    sample_matrix,
)
from .matrices import (
    RankedEntry,
    SparseMatrix,
    filtered_row_sums,
    gram_matvec,
    load_matrix_csv,
    matvec,
    norms,
    row_nonzero_counts,
    save_matrix_csv,
    top_entries,
    truncate_split,
)
from .limits import (
    COVARIANCE,
    CRITICAL,
    EDGE,
    HERMITIAN_KIND,
    POISSONIAN,
    RegimeParams,
    c_n,
    c_np,
    classify_regime,
    frechet_cdf,
    mp_cdf,
    mp_density,
    mp_edges,
    pp_mean_count,
)
from .localization import (
    LocalizationProfile,
    distance_to_basis_vector,
    distance_to_pair_vector,
    is_localized,
    localization_profile,
)
from .spectral import (
    INTERLACE_COL_DELETION,
    INTERLACE_HERMITIAN_MINOR,
    INTERLACE_ROW_DELETION,
    PerturbationCheck,
    SpectralResult,
    check_interlacing,
    eig_dense_symmetric,
    localization_bound_check,
    perturbation_check,
    principal_subradius,
    residual_vector,
    top_eigs,
)
from .stats import (
    Ecdf,
    EsdHistogram,
    concentration_check,
    esd,
    ks_statistic,
    large_entry_collision_scan,
    poisson_count_test,
    test_record,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    ReplicateRecord,
    derive_replicate_seed,
    make_config,
    run_edge_experiment,
    run_hermitian_experiment,
    run_invariant_suite,
    run_phase_sweep,
    run_poisson_experiment,
    run_truncation_experiment,
    truncation_window,
)

__version__ = "0.1.0"

__all__ = [
    "mix64",
    "TailLaw",
    "SparsitySpec",
    "EnsembleSpec",
    "sample_entry",
    "sample_entries",
    "sample_matrix",
    "SV_CONSTANT",
    "SV_LOG_POWER",
    "RECTANGULAR",
    "HERMITIAN",
    "BERNOULLI",
    "BAND",
    "FIXED_COUNT",
    "SparseMatrix",
    "RankedEntry",
    "matvec",
    "gram_matvec",
    "norms",
    "top_entries",
    "truncate_split",
    "filtered_row_sums",
    "row_nonzero_counts",
    "save_matrix_csv",
    "load_matrix_csv",
    "RegimeParams",
    "classify_regime",
    "c_np",
    "c_n",
    "frechet_cdf",
    "pp_mean_count",
    "mp_edges",
    "mp_density",
    "mp_cdf",
    "POISSONIAN",
    "EDGE",
    "CRITICAL",
    "COVARIANCE",
    "HERMITIAN_KIND",
    "LocalizationProfile",
    "localization_profile",
    "is_localized",
    "distance_to_basis_vector",
    "distance_to_pair_vector",
    "SpectralResult",
    "PerturbationCheck",
    "eig_dense_symmetric",
    "top_eigs",
    "check_interlacing",
    "perturbation_check",
    "residual_vector",
    "principal_subradius",
    "localization_bound_check",
    "INTERLACE_HERMITIAN_MINOR",
    "INTERLACE_ROW_DELETION",
    "INTERLACE_COL_DELETION",
    "Ecdf",
    "ks_statistic",
    "EsdHistogram",
    "esd",
    "poisson_count_test",
    "concentration_check",
    "large_entry_collision_scan",
    "test_record",
    "ExperimentConfig",
    "ReplicateRecord",
    "ExperimentReport",
    "derive_replicate_seed",
    "make_config",
    "run_poisson_experiment",
    "run_edge_experiment",
    "run_hermitian_experiment",
    "run_truncation_experiment",
    "run_phase_sweep",
    "run_invariant_suite",
    "truncation_window",
    "__version__",
]
