"""ROI masks stored as TNS1 0/1 tensors or binary PGM files."""
import numpy as np
from PIL import Image, UnidentifiedImageError

from apps.corecode.exceptions import FormatError
from apps.numerics.tensors import TNS_MAGIC, load_tensor


def load_roi(path):
    """Boolean ROI mask; nonzero pixels are inside."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == TNS_MAGIC:
        return load_tensor(path) != 0
    if magic[:2] == b"P5":
        try:
            with Image.open(path) as im:
                return np.asarray(im) != 0
        except (UnidentifiedImageError, OSError) as exc:
            raise FormatError(f"{path}: unreadable PGM ROI: {exc}") from exc
    raise FormatError(f"{path} is neither a TNS1 tensor nor a binary PGM")
