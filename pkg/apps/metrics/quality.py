"""Image quality metrics on magnitude images normalized to [0, 1] (peak 1.0)."""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from skimage.metrics import normalized_root_mse, structural_similarity

from apps.corecode.exceptions import DimensionError, DomainError, ShapeError

logger = logging.getLogger(__name__)

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
NRMSE_NORMALIZATIONS = ("euclidean", "min-max", "mean")


def _pair(recon, target):
    recon = np.asarray(recon, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if recon.shape != target.shape:
        raise ShapeError(f"image shapes differ: {recon.shape} vs {target.shape}")
    return recon, target


def psnr(recon, target):
    """20 log10(1 / rmse) in dB; identical images give ``inf``."""
    recon, target = _pair(recon, target)
    rmse = math.sqrt(float(np.mean((recon - target) ** 2)))
    if rmse == 0:
        return math.inf
    return 20.0 * math.log10(1.0 / rmse)


def ssim(recon, target):
    """Mean local SSIM, 11x11 Gaussian window (sigma 1.5), K1=0.01, K2=0.03, L=1."""
    recon, target = _pair(recon, target)
    if recon.ndim != 2 or min(recon.shape) < SSIM_WINDOW:
        raise DimensionError(
            f"SSIM needs a 2-D image of at least {SSIM_WINDOW}x{SSIM_WINDOW}, "
            f"got {recon.shape}"
        )
    return float(
        structural_similarity(
            target,
            recon,
            data_range=1.0,
            gaussian_weights=True,
            sigma=SSIM_SIGMA,
            use_sample_covariance=False,
            K1=0.01,
            K2=0.03,
        )
    )


def nrmse(recon, target, normalization="euclidean"):
    """Root-mean-square error normalized by ||target||_2 (or range / mean)."""
    recon, target = _pair(recon, target)
    if normalization not in NRMSE_NORMALIZATIONS:
        raise DomainError(f"unknown NRMSE normalization {normalization!r}")
    if normalization == "euclidean" and not np.any(target):
        raise DomainError("NRMSE is undefined for an all-zero reference")
    if normalization == "min-max" and target.max() == target.min():
        raise DomainError("NRMSE min-max normalization needs a non-constant reference")
    if normalization == "mean" and target.mean() == 0:
        raise DomainError("NRMSE mean normalization needs a nonzero reference mean")
    return float(normalized_root_mse(target, recon, normalization=normalization))


def summarize(values):
    """(mean, std) of a metric; an all-``inf`` PSNR column summarizes to (inf, 0)."""
    values = np.asarray(list(values), dtype=np.float64)
    if values.size == 0:
        return math.nan, math.nan
    if np.all(np.isposinf(values)):
        return math.inf, 0.0
    return float(np.mean(values)), float(np.std(values))


@dataclass
class ImageMetrics:
    """Scores of one image; a reference row carries only the ROI moments."""

    index: int
    psnr: Optional[float] = None
    ssim: Optional[float] = None
    nrmse: Optional[float] = None
    kurtosis: Optional[float] = None
    skewness: Optional[float] = None


@dataclass
class MetricsReport:
    """Per-image metrics, their aggregates and optional paired-test p-values."""

    label: str
    images: List[ImageMetrics] = field(default_factory=list)
    p_values: Dict[str, float] = field(default_factory=dict)

    def column(self, name):
        values = (getattr(image, name) for image in self.images)
        return [value for value in values if value is not None]

    def aggregate(self):
        out = {}
        for name in ("psnr", "ssim", "nrmse", "kurtosis", "skewness"):
            column = self.column(name)
            if column:
                mean, std = summarize(column)
                out[name] = {"mean": mean, "std": std}
        return out

    def to_dict(self):
        return {
            "label": self.label,
            "count": len(self.images),
            "aggregate": self.aggregate(),
            "p_values": dict(self.p_values),
        }


def roi_moments(index, image, roi):
    """ROI (kurtosis, skewness), or a pair of ``None`` when they are undefined."""
    from .histograms import roi_histogram_stats

    try:
        return roi_histogram_stats(image, roi)
    except DomainError as exc:
        logger.warning("image %s: no ROI moments: %s", index, exc)
        return None, None


def evaluate_pair(index, recon, target, roi=None, normalization="euclidean"):
    """All per-image metrics for one reconstruction/reference pair."""
    metrics = ImageMetrics(
        index=index,
        psnr=psnr(recon, target),
        ssim=ssim(recon, target),
        nrmse=nrmse(recon, target, normalization),
    )
    if roi is not None:
        metrics.kurtosis, metrics.skewness = roi_moments(index, recon, roi)
    return metrics


def reference_metrics(index, target, roi):
    """ROI moments of a ground-truth image; the other metrics stay empty."""
    kurtosis, skewness = roi_moments(index, target, roi)
    return ImageMetrics(index=index, kurtosis=kurtosis, skewness=skewness)
