"""Image augmentation pipelines and ensemble evaluation."""

from ._core import (
    AugensError,
    augment,
    auc,
    companion_counts,
    cosine_diversity,
    dct2,
    haar_dwt2,
    idct2,
    is_color_only,
    load_image,
    metrics,
    output_count,
    radon,
    save_image,
    sum_rule_fuse,
    wilcoxon,
)

__all__ = [
    "AugensError",
    "augment",
    "auc",
    "companion_counts",
    "cosine_diversity",
    "dct2",
    "haar_dwt2",
    "idct2",
    "is_color_only",
    "load_image",
    "metrics",
    "output_count",
    "radon",
    "save_image",
    "sum_rule_fuse",
    "wilcoxon",
]
