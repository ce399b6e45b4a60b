"""Centered unitary 2-D Fourier transforms.

Zero frequency sits at index (H/2, W/2): ``fft2c`` applies ifftshift before and
fftshift after a 1/sqrt(HW)-normalized DFT, so the central k-space rows are
literal central rows of the array. The transforms act on the last two axes.
"""
import numpy as np

from apps.corecode.exceptions import DimensionError

from .tensors import ComplexImage

_AXES = (-2, -1)


def is_power_of_two(n):
    return n > 0 and (n & (n - 1)) == 0


def check_fft_extents(shape):
    height, width = shape[-2], shape[-1]
    if not (is_power_of_two(height) and is_power_of_two(width)):
        raise DimensionError(
            f"FFT extents must be powers of two, got {height}x{width}"
        )


def fft2c(z):
    """Centered unitary forward DFT of a complex array over its last two axes."""
    z = np.asarray(z)
    check_fft_extents(z.shape)
    shifted = np.fft.ifftshift(z, axes=_AXES)
    return np.fft.fftshift(np.fft.fft2(shifted, axes=_AXES, norm="ortho"), axes=_AXES)


def ifft2c(k):
    """Inverse of :func:`fft2c`; also its adjoint."""
    k = np.asarray(k)
    check_fft_extents(k.shape)
    shifted = np.fft.ifftshift(k, axes=_AXES)
    return np.fft.fftshift(np.fft.ifft2(shifted, axes=_AXES, norm="ortho"), axes=_AXES)


def fft2(image: ComplexImage) -> ComplexImage:
    return ComplexImage.from_complex(fft2c(image.to_complex()))


def ifft2(kspace: ComplexImage) -> ComplexImage:
    return ComplexImage.from_complex(ifft2c(kspace.to_complex()))
