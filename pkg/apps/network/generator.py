"""Residual U-Net generator with refinement: x_hat = G(x_u, S) + x_u."""
import numpy as np

from apps.corecode.exceptions import DimensionError, ShapeError
from apps.numerics import ops
from apps.numerics.autodiff import Tape
from apps.numerics.tensors import ComplexImage

from .layers import bind, conv, decoder_block, encoder_block
from .params import DEPTH, EXTENT_DIVISOR


def generator_input(zero_filled, maps):
    """Stack ZF re/im with every coil map's re/im: N x (2 + 2C) x H x W.

    ``zero_filled`` is N x 2 x H x W; ``maps`` is complex N x C x H x W.
    """
    maps = np.asarray(maps)
    if maps.ndim != 4 or maps.shape[0] != zero_filled.shape[0]:
        raise ShapeError(f"maps {maps.shape} do not match images {zero_filled.shape}")
    coil_planes = np.stack([maps.real, maps.imag], axis=2).reshape(
        maps.shape[0], -1, *maps.shape[2:]
    )
    return np.concatenate([zero_filled, coil_planes], axis=1)


def check_generator_extent(height, width):
    if height % EXTENT_DIVISOR or width % EXTENT_DIVISOR:
        raise DimensionError(
            f"generator input {height}x{width} must be divisible by {EXTENT_DIVISOR}"
        )


def generator_graph(p, zero_filled, maps):
    """Generator on a tape; returns the refined N x 2 x H x W node.

    ``zero_filled`` is a node (N x 2 x H x W) so the refinement sum stays on
    the tape; ``maps`` is a complex array.
    """
    tape = zero_filled.tape
    check_generator_extent(*zero_filled.shape[-2:])
    x = tape.constant(generator_input(zero_filled.value, maps))
    skips = [x]
    h = x
    for i in range(1, DEPTH + 1):
        h = encoder_block(p, f"gen.enc{i}", h, ops.relu)
        skips.append(h)
    # deepest encoder output feeds dec1; the rest pair with decoders in reverse
    for i, skip in enumerate(reversed(skips[:-1]), start=1):
        h = decoder_block(p, f"gen.dec{i}", h, skip, ops.relu)
    residual = conv(p, "gen.final", h)
    return ops.add(residual, zero_filled)


def generator_forward(params, zero_filled, sens):
    """Refine one zero-filled image; returns a ComplexImage."""
    tape = Tape(enabled=False)
    p = bind(tape, params.generator(), trainable=False)
    x_u = tape.constant(zero_filled.to_planes()[None])
    out = generator_graph(p, x_u, sens.maps[None])
    return ComplexImage.from_planes(out.value[0])
