"""The parallel-imaging encoding operator y = M F S x + n and its adjoint."""
import logging
from dataclasses import dataclass

import numpy as np

from apps.corecode.exceptions import ShapeError
from apps.numerics.fft import fft2c, ifft2c
from apps.numerics.tensors import ComplexImage, as_tensor

from .masks import SamplingMask

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KSpaceData:
    """Per-coil complex measurements; unsampled rows are exactly zero."""

    data: np.ndarray
    mask: SamplingMask

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.complex128)
        if data.ndim != 3 or data.shape[1:] != self.mask.shape:
            raise ShapeError(
                f"k-space {data.shape} does not match mask {self.mask.shape}"
            )
        object.__setattr__(self, "data", data)

    @property
    def coils(self):
        return self.data.shape[0]

    def to_planes(self):
        return np.stack([self.data.real, self.data.imag], axis=1)

    @classmethod
    def from_planes(cls, planes, mask):
        planes = as_tensor(planes)
        if planes.ndim != 4 or planes.shape[1] != 2:
            raise ShapeError(f"expected [C, 2, H, W] planes, got {planes.shape}")
        return cls(planes[:, 0] + 1j * planes[:, 1], mask)


def encode(image, maps, rows):
    """M F S x on plain arrays; ``image`` (..., H, W), ``maps`` (..., C, H, W)."""
    coil_images = maps * np.expand_dims(image, -3)
    return fft2c(coil_images) * rows[:, None]


def decode(kspace, maps):
    """S^H F^H on plain arrays, the adjoint of :func:`encode` for masked data."""
    return np.sum(np.conj(maps) * ifft2c(kspace), axis=-3)


def _check_consistent(image_shape, sens, mask):
    if sens.shape != tuple(image_shape) or mask.shape != tuple(image_shape):
        raise ShapeError(
            f"image {tuple(image_shape)}, sensitivities {sens.shape} and mask "
            f"{mask.shape} must share spatial extents"
        )


def forward_encode(x, sens, mask, noise_sigma=0.0, seed=None):
    """Simulate multi-coil undersampled k-space from a complex image.

    Complex Gaussian noise of per-component std ``noise_sigma`` is drawn only on
    sampled rows, deterministically from ``seed``.
    """
    _check_consistent(x.shape, sens, mask)
    data = encode(x.to_complex(), sens.maps, mask.rows)
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        sampled = np.flatnonzero(mask.rows)
        noise_shape = (sens.coils, sampled.size, mask.width)
        noise = rng.standard_normal(noise_shape) + 1j * rng.standard_normal(noise_shape)
        data[:, sampled, :] += noise_sigma * noise
    return KSpaceData(data, mask)


def adjoint_decode(kspace, sens):
    """Coil-combined zero-filled image sum_c conj(S_c) F^H y_c."""
    if kspace.coils != sens.coils:
        raise ShapeError(
            f"k-space has {kspace.coils} coils but sensitivities have {sens.coils}"
        )
    if sens.shape != kspace.mask.shape:
        raise ShapeError(
            f"sensitivities {sens.shape} do not match k-space {kspace.mask.shape}"
        )
    return ComplexImage.from_complex(decode(kspace.data, sens.maps))


def zero_filled(x, sens, mask, noise_sigma=0.0, seed=None):
    """Convenience: simulate then adjoint-decode, returning (x_u, kspace)."""
    kspace = forward_encode(x, sens, mask, noise_sigma=noise_sigma, seed=seed)
    return adjoint_decode(kspace, sens), kspace
