"""Wilcoxon signed-rank test with an exact small-sample branch."""
import logging
import math

import numpy as np
from scipy.stats import norm, rankdata

from apps.corecode.exceptions import DomainError, ShapeError

logger = logging.getLogger(__name__)

EXACT_LIMIT = 25
MIN_PAIRS = 5


def signed_ranks(a, b):
    """Average ranks of |a - b| over nonzero differences, and their signs."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ShapeError(
            f"paired samples must be equal-length vectors, got {a.shape} and {b.shape}"
        )
    diff = a - b
    diff = diff[diff != 0]
    return rankdata(np.abs(diff)), np.sign(diff)


def exact_distribution(ranks):
    """Counts of every attainable doubled W+ over the 2^n sign assignments."""
    doubled = np.rint(2 * np.asarray(ranks)).astype(np.int64)
    counts = np.zeros(int(doubled.sum()) + 1, dtype=np.float64)
    counts[0] = 1.0
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: counts.size - r]
        counts = counts + shifted
    return counts


def exact_p_value(ranks, w_plus):
    counts = exact_distribution(ranks)
    w = int(round(2 * w_plus))
    total = counts.sum()
    lower = counts[: w + 1].sum() / total
    upper = counts[w:].sum() / total
    return min(1.0, 2.0 * min(lower, upper))


def normal_p_value(ranks, w_plus):
    """Normal approximation with tie and continuity corrections."""
    n = ranks.size
    mean = n * (n + 1) / 4.0
    _, ties = np.unique(ranks, return_counts=True)
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - np.sum(ties**3 - ties) / 48.0
    if variance <= 0:
        return 1.0
    z = max(abs(w_plus - mean) - 0.5, 0.0) / math.sqrt(variance)
    return float(min(1.0, 2.0 * norm.sf(z)))


def wilcoxon_signed_rank(a, b, method="auto"):
    """Two-sided p-value for paired samples ``a`` and ``b``.

    Zero differences are dropped. ``method`` is ``auto`` (exact up to 25
    pairs), ``exact`` or ``approx``. Identical samples give p = 1.
    """
    if method not in ("auto", "exact", "approx"):
        raise DomainError(f"unknown method {method!r}")
    ranks, signs = signed_ranks(a, b)
    n = ranks.size
    if n == 0:
        return 1.0
    if n < MIN_PAIRS:
        raise DomainError(f"need at least {MIN_PAIRS} nonzero differences, got {n}")
    w_plus = float(ranks[signs > 0].sum())
    if method == "exact" or (method == "auto" and n <= EXACT_LIMIT):
        p = exact_p_value(ranks, w_plus)
    else:
        p = normal_p_value(ranks, w_plus)
    logger.debug("wilcoxon n=%d W+=%s p=%.6g (%s)", n, w_plus, p, method)
    return float(p)
