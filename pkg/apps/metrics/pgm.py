"""16-bit binary PGM (P5) magnitude images, linear [0, 1] -> [0, 65535]."""
import os

import numpy as np
from PIL import Image, UnidentifiedImageError

from apps.corecode.exceptions import FormatError, ShapeError

PGM_MAXVAL = 65535


def quantize(image):
    """Clip to [0, 1] and map to the integer PGM levels."""
    image = np.asarray(image, dtype=np.float64)
    return np.rint(np.clip(image, 0.0, 1.0) * PGM_MAXVAL).astype(np.int32)


def dequantize(levels):
    return np.asarray(levels, dtype=np.float64) / PGM_MAXVAL


def write_pgm(path, image):
    levels = quantize(image)
    if levels.ndim != 2:
        raise ShapeError(f"PGM images are 2-D, got {levels.shape}")
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    Image.fromarray(levels).save(path, format="PPM")


def read_pgm(path):
    """Pixel values back in [0, 1]."""
    try:
        with Image.open(path) as im:
            levels = np.asarray(im, dtype=np.float64)
    except (UnidentifiedImageError, OSError) as exc:
        raise FormatError(f"{path}: not a readable PGM: {exc}") from exc
    return levels / PGM_MAXVAL


def image_names(index):
    """File names of one test sample's reconstruction, reference and error map."""
    return {
        "recon": f"recon_{index}.pgm",
        "gt": f"gt_{index}.pgm",
        "error": f"error_{index}.pgm",
    }
