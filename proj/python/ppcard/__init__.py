"""Privacy-preserving cardinality estimation over Bloom filters."""

from ppcard._core import (
    BloomFilter,
    dice,
    encode_record,
    estimate_cardinality,
    exact_same_cluster_probability,
    expected_fpr,
    flip_probability,
    generate_providers,
    monte_carlo_same_cluster,
    perturb,
    purity,
    qgrams,
    run_pipeline,
    same_cluster_probability,
)

__all__ = [
    "BloomFilter",
    "dice",
    "encode_record",
    "estimate_cardinality",
    "exact_same_cluster_probability",
    "expected_fpr",
    "flip_probability",
    "generate_providers",
    "monte_carlo_same_cluster",
    "perturb",
    "purity",
    "qgrams",
    "run_pipeline",
    "same_cluster_probability",
]
