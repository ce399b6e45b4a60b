"""Building blocks shared by the generator and the discriminator.

``p`` is a mapping from parameter name to tape node (leaf or constant).
"""
from apps.numerics import ops


def conv(p, name, x, stride=1):
    return ops.conv2d(x, p[f"{name}.w"], p[f"{name}.b"], stride=stride)


def residual_block(p, prefix, x, act):
    """conv0 -> conv1 -> conv2 with a short additive skip around the three."""
    h = act(conv(p, f"{prefix}.conv0", x))
    h = act(conv(p, f"{prefix}.conv1", h))
    h = conv(p, f"{prefix}.conv2", h)
    return act(ops.add(x, h))


def encoder_block(p, prefix, x, act):
    h = act(conv(p, f"{prefix}.down", x, stride=2))
    h = residual_block(p, f"{prefix}.res", h, act)
    return act(conv(p, f"{prefix}.out", h))


def decoder_block(p, prefix, x, skip, act):
    h = ops.concat([ops.upsample2x(x), skip], axis=1)
    h = act(conv(p, f"{prefix}.in", h))
    h = residual_block(p, f"{prefix}.res", h, act)
    return act(conv(p, f"{prefix}.out", h))


def leaky(x):
    return ops.leaky_relu(x, 0.2)


def bind(tape, tensors, trainable):
    """Put parameter arrays on ``tape`` as leaves (trainable) or constants."""
    if trainable:
        return {name: tape.leaf(value, name) for name, value in tensors.items()}
    return {name: tape.constant(value) for name, value in tensors.items()}
