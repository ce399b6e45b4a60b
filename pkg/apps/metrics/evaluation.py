"""Score a directory of reconstructed PGMs against a dataset's references."""
import logging
import os

import numpy as np

from apps.corecode.exceptions import DatasetError, DomainError

from .pgm import dequantize, image_names, quantize, read_pgm
from .quality import MetricsReport, evaluate_pair, reference_metrics
from .stats import wilcoxon_signed_rank

logger = logging.getLogger(__name__)

PAIRED_METRICS = ("psnr", "ssim", "nrmse")
IMAGE_COLUMNS = ["method", "index", "psnr", "ssim", "nrmse", "kurtosis", "skewness"]
METRICS_CSV = "metrics.csv"
METRICS_JSON = "metrics.json"
REFERENCE_LABEL = "reference"


def reference_magnitude(sample):
    """Ground-truth magnitude passed through the same 16-bit mapping as outputs."""
    return dequantize(quantize(sample.image.magnitude()))


def evaluate_directory(
    recon_dir, dataset, roi=None, normalization="euclidean", label=None
):
    """MetricsReport for every sample of ``dataset`` found in ``recon_dir``.

    ``roi`` is a boolean mask applied to all images; without it tumor ROIs
    stored with the dataset are used when present.
    """
    missing = [
        s.index
        for s in dataset.samples
        if not os.path.exists(os.path.join(recon_dir, image_names(s.index)["recon"]))
    ]
    if missing:
        raise DatasetError(
            f"{recon_dir}: reconstructions missing for indices {missing}"
        )
    report = MetricsReport(label=label or os.path.basename(os.path.normpath(recon_dir)))
    for sample in dataset.samples:
        recon = read_pgm(os.path.join(recon_dir, image_names(sample.index)["recon"]))
        sample_roi = roi if roi is not None else sample.roi
        report.images.append(
            evaluate_pair(
                sample.index,
                recon,
                reference_magnitude(sample),
                roi=sample_roi,
                normalization=normalization,
            )
        )
    logger.info("evaluated %d images in %s", len(report.images), recon_dir)
    return report


def reference_report(dataset, roi=None, label=REFERENCE_LABEL):
    """ROI moments of the ground truth, or ``None`` when no sample has an ROI."""
    report = MetricsReport(label=label)
    for sample in dataset.samples:
        sample_roi = roi if roi is not None else sample.roi
        if sample_roi is None:
            continue
        target = reference_magnitude(sample)
        report.images.append(reference_metrics(sample.index, target, sample_roi))
    return report if report.images else None


def paired_p_values(first, second):
    """Wilcoxon p-values between two reports over the samples they share."""
    shared = sorted({m.index for m in first.images} & {m.index for m in second.images})
    by_first = {m.index: m for m in first.images}
    by_second = {m.index: m for m in second.images}
    p_values = {}
    for name in PAIRED_METRICS:
        a = np.array([getattr(by_first[i], name) for i in shared], dtype=np.float64)
        b = np.array([getattr(by_second[i], name) for i in shared], dtype=np.float64)
        if np.array_equal(a, b):
            p_values[name] = 1.0
            continue
        finite = np.isfinite(a) & np.isfinite(b)
        try:
            p_values[name] = wilcoxon_signed_rank(a[finite], b[finite])
        except DomainError as exc:
            logger.warning("no paired test for %s: %s", name, exc)
            p_values[name] = None
    return p_values


def _cell(value):
    return "" if value is None else value


def image_rows(report):
    for m in report.images:
        yield {
            "method": report.label,
            "index": m.index,
            "psnr": _cell(m.psnr),
            "ssim": _cell(m.ssim),
            "nrmse": _cell(m.nrmse),
            "kurtosis": _cell(m.kurtosis),
            "skewness": _cell(m.skewness),
        }
