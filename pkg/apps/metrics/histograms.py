import numpy as np
from scipy import stats

from apps.corecode.exceptions import DomainError, ShapeError


def roi_values(image, roi):
    image = np.asarray(image, dtype=np.float64)
    roi = np.asarray(roi, dtype=bool)
    if roi.shape != image.shape:
        raise ShapeError(f"ROI {roi.shape} does not match image {image.shape}")
    values = image[roi]
    if values.size == 0:
        raise DomainError("ROI is empty")
    return values


def roi_histogram_stats(image, roi):
    """(kurtosis, skewness) of ROI intensities after min-max normalization.

    Population moments; kurtosis is non-excess (a Gaussian gives 3).
    """
    values = roi_values(image, roi)
    low, high = values.min(), values.max()
    if high == low:
        raise DomainError("ROI intensities are constant, moments are undefined")
    values = (values - low) / (high - low)
    kurtosis = stats.kurtosis(values, fisher=False, bias=True)
    skewness = stats.skew(values, bias=True)
    return float(kurtosis), float(skewness)
