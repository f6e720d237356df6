"""Segmentation overlap, surface distance, phenotype and distribution metrics."""
from .distributions import kl_divergence_hist, paired_t_test, wasserstein_1d
from .evaluate import (
    COMPLETION_STRUCTURES,
    evaluate_completion,
    evaluate_generation,
)
from .overlap import assd, dice, hausdorff, surface_distances
from .phenotypes import (
    PHENOTYPE_FIELDS,
    PhenotypeRecord,
    phenotype_diff,
    phenotypes,
)

__all__ = [
    "COMPLETION_STRUCTURES",
    "PHENOTYPE_FIELDS",
    "PhenotypeRecord",
    "assd",
    "dice",
    "evaluate_completion",
    "evaluate_generation",
    "hausdorff",
    "kl_divergence_hist",
    "paired_t_test",
    "phenotype_diff",
    "phenotypes",
    "surface_distances",
    "wasserstein_1d",
]
