"""Seven-layer CNN discriminator on magnitude images."""
import numpy as np

from apps.corecode.exceptions import DimensionError, ShapeError
from apps.numerics import ops
from apps.numerics.autodiff import Tape

from .layers import bind, conv, encoder_block, leaky

MIN_EXTENT = 4


def discriminator_logits(p, image):
    """Per-sample logits (shape N) for an N x 1 x H x W magnitude node."""
    if image.value.ndim != 4 or image.shape[1] != 1:
        raise ShapeError(f"discriminator expects N x 1 x H x W, got {image.shape}")
    height, width = image.shape[-2:]
    if height < MIN_EXTENT or width < MIN_EXTENT:
        raise DimensionError(
            f"discriminator input {height}x{width} "
            f"is smaller than {MIN_EXTENT}x{MIN_EXTENT}"
        )
    h = leaky(conv(p, "disc.l1", image, stride=2))
    h = leaky(conv(p, "disc.l2", h, stride=2))
    for i in range(3, 7):
        h = encoder_block(p, f"disc.enc{i}", h, leaky)
    h = conv(p, "disc.l7", h)
    return ops.mean(h, axis=(1, 2, 3))


def discriminator_graph(p, image):
    return ops.sigmoid(discriminator_logits(p, image))


def discriminator_forward(params, image):
    """Probability in (0, 1) that a 1 x H x W (or H x W) magnitude image is real."""
    tape = Tape(enabled=False)
    p = bind(tape, params.discriminator(), trainable=False)
    value = image if image.ndim == 3 else image[None]
    out = discriminator_graph(p, tape.constant(value[None]))
    # keep the reported probability strictly inside (0, 1) even when the
    # logistic saturates in float64
    return float(np.clip(out.value[0], np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0)))
