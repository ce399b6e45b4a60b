import logging
from dataclasses import dataclass

import numpy as np

from apps.corecode.exceptions import ConfigurationError, DomainError, ShapeError
from apps.numerics.fft import ifft2c
from apps.numerics.tensors import as_tensor

from .masks import acs_rows

logger = logging.getLogger(__name__)

RSS_FLOOR = 1e-8


def root_sum_of_squares(maps, axis=0):
    return np.sqrt(np.sum(np.abs(maps) ** 2, axis=axis))


def normalize_maps(maps):
    """Scale coil maps so sum_c |S_c|^2 = 1 wherever they are not all zero."""
    rss = root_sum_of_squares(maps)
    return np.where(rss > 0, maps / np.where(rss > 0, rss, 1.0), 0)


@dataclass(frozen=True)
class CoilSensitivities:
    """C complex H x W coil maps."""

    maps: np.ndarray

    def __post_init__(self):
        maps = np.asarray(self.maps, dtype=np.complex128)
        if maps.ndim != 3:
            raise ShapeError(f"coil maps must be C x H x W, got {maps.shape}")
        object.__setattr__(self, "maps", maps)

    @property
    def coils(self):
        return self.maps.shape[0]

    @property
    def shape(self):
        return self.maps.shape[1:]

    @classmethod
    def from_planes(cls, planes):
        planes = as_tensor(planes)
        if planes.ndim != 4 or planes.shape[1] != 2:
            raise ShapeError(f"expected [C, 2, H, W] planes, got {planes.shape}")
        return cls(planes[:, 0] + 1j * planes[:, 1])

    def to_planes(self):
        return np.stack([self.maps.real, self.maps.imag], axis=1)

    def normalization_error(self, support=None):
        """Largest | sum_c |S_c|^2 - 1 | over ``support`` (everywhere if None)."""
        power = np.sum(np.abs(self.maps) ** 2, axis=0)
        if support is not None:
            power = power[np.asarray(support, dtype=bool)]
        return float(np.max(np.abs(power - 1.0))) if power.size else 0.0


def estimate_sensitivities_acs(kspace):
    """Low-resolution coil maps from the ACS block of ``kspace`` (a KSpaceData).

    The ACS rows are inverse transformed per coil, divided by the
    root-sum-of-squares image (floored at 1e-8) and renormalized to unit power.
    """
    mask = kspace.mask
    if mask.acs <= 0:
        raise ConfigurationError("sensitivity estimation needs a non-empty ACS block")
    rows = acs_rows(mask.height, mask.acs)
    acs_only = np.zeros_like(kspace.data)
    acs_only[:, rows, :] = kspace.data[:, rows, :]
    if not np.any(acs_only):
        raise DomainError("ACS block is all zero; cannot estimate sensitivities")

    low_res = ifft2c(acs_only)
    rss = root_sum_of_squares(low_res)
    maps = low_res / np.maximum(rss, RSS_FLOOR)
    maps = normalize_maps(maps)
    logger.debug("estimated %d coil maps from %d ACS rows", maps.shape[0], mask.acs)
    return CoilSensitivities(maps)
