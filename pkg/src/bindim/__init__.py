"""Correlation dimension and normalized correlation dimension of sparse
binary (0/1) datasets, with independent-columns reference models,
closed-form approximations, synthetic generators, and baseline
comparators (PCA, average correlation, k-means)."""

from .baselines import Clustering, PcaSummary, avg_abs_correlation, kmeans, pca_summary
from .dataset import (
    BinaryDataset,
    MarginProfile,
    copy_columns,
    dump,
    dumps,
    gen_independent,
    gen_markov,
    load,
    loads,
    margins,
    permute_columns,
    random_profile,
    random_subset,
    t_measure,
)
from .dimension import (
    DimConfig,
    DimensionEstimate,
    NormalizedResult,
    cd_at_mean_radii,
    cd_at_quantiles,
    cd_at_radii,
    data_cdf,
    dimension_of,
    independent_cd_approx,
    independent_model_cd,
    ncd_from_ratio,
    normalized_cd,
    normalized_cd_from,
    slope_constant,
)
from .distances import (
    DistanceCdf,
    binomial_model,
    disagreement_probs,
    exact_cdf,
    independent_mc_cdf,
    sampled_cdf,
)
from .errors import (
    BindimError,
    DegenerateDataError,
    DegenerateRangeError,
    EmptyDatasetError,
    FormatError,
    InsufficientMassError,
    NoRootError,
    SaturationError,
)
from .experiments import EXPERIMENT_NAMES, ExperimentResult, ExperimentSpec, run_experiment
from .reports import DatasetReport, dataset_report
from .streams import derive_rng, derive_seed

__version__ = "0.1.0"

__all__ = [
    "BinaryDataset",
    "BindimError",
    "Clustering",
    "DatasetReport",
    "DegenerateDataError",
    "DegenerateRangeError",
    "DimConfig",
    "DimensionEstimate",
    "DistanceCdf",
    "EmptyDatasetError",
    "EXPERIMENT_NAMES",
    "ExperimentResult",
    "ExperimentSpec",
    "FormatError",
    "InsufficientMassError",
    "MarginProfile",
    "NoRootError",
    "NormalizedResult",
    "PcaSummary",
    "SaturationError",
    "avg_abs_correlation",
    "binomial_model",
    "cd_at_mean_radii",
    "cd_at_quantiles",
    "cd_at_radii",
    "copy_columns",
    "data_cdf",
    "dataset_report",
    "derive_rng",
    "derive_seed",
    "dimension_of",
    "disagreement_probs",
    "dump",
    "dumps",
    "exact_cdf",
    "gen_independent",
    "gen_markov",
    "independent_cd_approx",
    "independent_mc_cdf",
    "independent_model_cd",
    "kmeans",
    "load",
    "loads",
    "margins",
    "ncd_from_ratio",
    "normalized_cd",
    "normalized_cd_from",
    "pca_summary",
    "permute_columns",
    "random_profile",
    "random_subset",
    "run_experiment",
    "sampled_cdf",
    "slope_constant",
    "t_measure",
]
