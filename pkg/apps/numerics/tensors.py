"""Dense float64 tensors, complex images and the TNS1 binary format.

A TNS1 file is the magic ``TNS1``, a little-endian u32 rank, ``rank``
little-endian u32 extents and then the row-major little-endian float64 data.
"""
import logging
import struct
from dataclasses import dataclass

import numpy as np

from apps.corecode.exceptions import FormatError, ShapeError

logger = logging.getLogger(__name__)

TNS_MAGIC = b"TNS1"


def as_tensor(data):
    """Coerce to a C-contiguous float64 array, the tensor substrate everywhere."""
    return np.ascontiguousarray(data, dtype=np.float64)


def tensor_to_bytes(array):
    array = as_tensor(array)
    if any(extent <= 0 for extent in array.shape):
        raise ShapeError(f"tensor extents must be positive, got {array.shape}")
    header = TNS_MAGIC + struct.pack("<I", array.ndim)
    header += np.asarray(array.shape, dtype="<u4").tobytes()
    return header + array.astype("<f8").tobytes()


def tensor_from_bytes(buffer, offset=0):
    """Decode one TNS1 block starting at ``offset``.

    Returns the array and the offset just past the block so concatenated
    blocks (checkpoints) can be read in sequence.
    """
    if buffer[offset : offset + 4] != TNS_MAGIC:
        raise FormatError(f"bad TNS1 magic at byte {offset}")
    try:
        (rank,) = struct.unpack_from("<I", buffer, offset + 4)
        pos = offset + 8
        shape = tuple(int(v) for v in np.frombuffer(buffer, "<u4", rank, pos))
        pos += 4 * rank
        count = int(np.prod(shape, dtype=np.int64))
        data = np.frombuffer(buffer, "<f8", count, pos)
    except (struct.error, ValueError) as exc:
        raise FormatError(f"truncated TNS1 block at byte {offset}") from exc
    pos += 8 * count
    return data.astype(np.float64).reshape(shape), pos


def save_tensor(path, array):
    try:
        with open(path, "wb") as fh:
            fh.write(tensor_to_bytes(array))
    except OSError as exc:
        raise OSError(f"cannot write tensor file {path}: {exc}") from exc
    logger.debug("wrote %s %s", path, np.shape(array))


def load_tensor(path):
    try:
        with open(path, "rb") as fh:
            buffer = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read tensor file {path}: {exc}") from exc
    array, end = tensor_from_bytes(buffer)
    if end != len(buffer):
        raise FormatError(f"{path}: {len(buffer) - end} trailing bytes after TNS1 data")
    return array


@dataclass(frozen=True)
class ComplexImage:
    """H x W complex field kept as separate real and imaginary planes."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        re, im = as_tensor(self.re), as_tensor(self.im)
        if re.shape != im.shape or re.ndim != 2:
            raise ShapeError(
                f"re/im planes must share a 2-D shape, got {re.shape} and {im.shape}"
            )
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @property
    def height(self):
        return self.re.shape[0]

    @property
    def width(self):
        return self.re.shape[1]

    @property
    def shape(self):
        return self.re.shape

    @classmethod
    def from_complex(cls, z):
        z = np.asarray(z)
        return cls(np.real(z), np.imag(z))

    @classmethod
    def from_planes(cls, planes):
        planes = as_tensor(planes)
        if planes.ndim != 3 or planes.shape[0] != 2:
            raise ShapeError(f"expected [2, H, W] planes, got {planes.shape}")
        return cls(planes[0], planes[1])

    @classmethod
    def zeros(cls, height, width):
        return cls(np.zeros((height, width)), np.zeros((height, width)))

    def to_complex(self):
        return self.re + 1j * self.im

    def to_planes(self):
        return np.stack([self.re, self.im])

    def magnitude(self):
        return np.hypot(self.re, self.im)
