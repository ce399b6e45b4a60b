import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from apps.corecode.exceptions import ConfigurationError, ShapeError
from apps.numerics.tensors import load_tensor, save_tensor

logger = logging.getLogger(__name__)


def sampled_line_count(height, af):
    """round(H / af) with halves rounded up."""
    return int(math.floor(height / af + 0.5))


def acs_rows(height, acs):
    """Indices of the ``acs`` contiguous central phase-encode rows."""
    start = height // 2 - acs // 2
    return np.arange(start, start + acs)


@dataclass(frozen=True)
class SamplingMask:
    """1-D Cartesian phase-encode line mask; row ``r`` sampled means all of row r."""

    rows: np.ndarray
    width: int
    af: float
    acs: int

    def __post_init__(self):
        object.__setattr__(self, "rows", np.asarray(self.rows, dtype=bool).copy())

    @property
    def height(self):
        return self.rows.shape[0]

    @property
    def shape(self):
        return (self.height, self.width)

    @property
    def count(self):
        return int(self.rows.sum())

    def matrix(self):
        """The H x W binary mask as float64 0/1 values."""
        return np.repeat(self.rows[:, None], self.width, axis=1).astype(np.float64)

    def apply(self, kspace):
        kspace = np.asarray(kspace)
        if kspace.shape[-2:] != self.shape:
            raise ShapeError(f"mask {self.shape} does not fit k-space {kspace.shape}")
        return np.where(self.rows[:, None], kspace, 0)


@dataclass(frozen=True)
class MaskConfig:
    af: float = 4.0
    acs: int = 8
    seed: int = 0
    regenerate_each_epoch: bool = False

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigurationError(f"unknown mask config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self):
        return asdict(self)

    def build(self, height, width, epoch=0):
        seed = self.seed + epoch if self.regenerate_each_epoch else self.seed
        return make_mask(height, width, self.af, self.acs, seed)


def make_mask(height, width, af, acs, seed):
    """Random line mask with a fixed ACS block and exactly round(H/af) lines."""
    if af < 1:
        raise ConfigurationError(f"acceleration factor must be >= 1, got {af}")
    if acs < 0:
        raise ConfigurationError(f"ACS line count must be >= 0, got {acs}")
    lines = sampled_line_count(height, af)
    if acs > lines:
        raise ConfigurationError(
            f"ACS block of {acs} rows exceeds the {lines} lines sampled at AF={af}"
        )
    if lines > height:
        raise ConfigurationError(f"{lines} lines requested for a height of {height}")

    rows = np.zeros(height, dtype=bool)
    rows[acs_rows(height, acs)] = True
    candidates = np.flatnonzero(~rows)
    rng = np.random.default_rng(seed)
    picked = rng.choice(candidates, size=lines - acs, replace=False)
    rows[picked] = True
    logger.debug(
        "mask H=%d af=%s acs=%d seed=%s -> %d lines", height, af, acs, seed, lines
    )
    return SamplingMask(rows=rows, width=width, af=float(af), acs=int(acs))


def central_run(rows):
    """Length of the contiguous sampled block centred on row H/2."""
    rows = np.asarray(rows, dtype=bool)
    center = rows.shape[0] // 2
    if not rows[center]:
        return 0
    lo = center
    while lo > 0 and rows[lo - 1]:
        lo -= 1
    hi = center
    while hi < rows.shape[0] - 1 and rows[hi + 1]:
        hi += 1
    return hi - lo + 1


def save_mask(path, mask):
    save_tensor(path, mask.rows.astype(np.float64))


def load_mask(path, width=None, acs=None):
    """Read a rank-1 0/1 mask; af is taken as H / sampled lines."""
    values = load_tensor(path)
    if values.ndim != 1:
        raise ShapeError(f"{path}: mask tensors are rank 1, got shape {values.shape}")
    rows = values != 0
    height = rows.shape[0]
    count = int(rows.sum())
    return SamplingMask(
        rows=rows,
        width=height if width is None else width,
        af=height / count if count else float("inf"),
        acs=central_run(rows) if acs is None else acs,
    )
