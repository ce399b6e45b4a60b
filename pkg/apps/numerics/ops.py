"""Differentiable operations recorded on a :class:`~apps.numerics.autodiff.Tape`.

Image tensors are laid out N x C x H x W. Complex tensors carry a real/imag
channel pair on axis -3, i.e. ``(..., 2, H, W)``.
"""
import numpy as np
from scipy.special import expit

from apps.corecode.exceptions import ShapeError

from .autodiff import Node
from .fft import fft2c, ifft2c


def _tape_of(*values):
    for value in values:
        if isinstance(value, Node):
            return value.tape
    raise TypeError("at least one operand must be a Node")


def _unbroadcast(grad, shape):
    """Sum ``grad`` down to ``shape`` after numpy broadcasting."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


# elementwise


def add(a, b):
    tape = _tape_of(a, b)
    a, b = tape.lift(a), tape.lift(b)

    def back(g):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return tape.record("add", a.value + b.value, (a, b), back)


def sub(a, b):
    tape = _tape_of(a, b)
    a, b = tape.lift(a), tape.lift(b)

    def back(g):
        return _unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)

    return tape.record("sub", a.value - b.value, (a, b), back)


def mul(a, b):
    tape = _tape_of(a, b)
    a, b = tape.lift(a), tape.lift(b)

    def back(g):
        return _unbroadcast(g * b.value, a.shape), _unbroadcast(g * a.value, b.shape)

    return tape.record("mul", a.value * b.value, (a, b), back)


def scale(x, factor):
    factor = float(factor)
    return x.tape.record("scale", x.value * factor, (x,), lambda g: (g * factor,))


def relu(x):
    active = x.value > 0
    out = np.where(active, x.value, 0.0)
    return x.tape.record("relu", out, (x,), lambda g: (g * active,))


def leaky_relu(x, slope=0.2):
    factor = np.where(x.value > 0, 1.0, slope)
    return x.tape.record("leaky_relu", x.value * factor, (x,), lambda g: (g * factor,))


def sigmoid(x):
    out = expit(x.value)
    return x.tape.record("sigmoid", out, (x,), lambda g: (g * out * (1.0 - out),))


def softplus(x):
    """log(1 + exp(x)), stable for large |x|."""
    out = np.logaddexp(0.0, x.value)
    slope = expit(x.value)
    return x.tape.record("softplus", out, (x,), lambda g: (g * slope,))


def log(x):
    return x.tape.record("log", np.log(x.value), (x,), lambda g: (g / x.value,))


def absolute(x):
    sign = np.sign(x.value)
    return x.tape.record("abs", np.abs(x.value), (x,), lambda g: (g * sign,))


# reductions


def total(x, axis=None):
    shape = x.shape
    if axis is None:

        def back(g):
            return (np.full(shape, float(g)),)

        return x.tape.record("sum", np.asarray(np.sum(x.value)), (x,), back)

    def back_axis(g):
        return (np.broadcast_to(np.expand_dims(g, axis), shape).copy(),)

    return x.tape.record("sum", np.sum(x.value, axis=axis), (x,), back_axis)


def mean(x, axis=None):
    if axis is None:
        count = x.value.size
    else:
        count = int(np.prod([x.shape[a] for a in np.atleast_1d(axis)]))
    return scale(total(x, axis), 1.0 / count)


# shape plumbing


def concat(nodes, axis=1):
    tape = _tape_of(*nodes)
    nodes = [tape.lift(n) for n in nodes]
    bounds = np.cumsum([n.shape[axis] for n in nodes])[:-1]

    def back(g):
        return tuple(np.split(g, bounds, axis=axis))

    out = np.concatenate([n.value for n in nodes], axis=axis)
    return tape.record("concat", out, nodes, back)


def upsample2x(x):
    """Nearest-neighbour x2 upsampling of the two trailing axes."""
    out = np.repeat(np.repeat(x.value, 2, axis=-2), 2, axis=-1)
    *lead, height, width = x.shape

    def back(g):
        return (g.reshape(*lead, height, 2, width, 2).sum(axis=(-3, -1)),)

    return x.tape.record("upsample2x", out, (x,), back)


# convolution


def conv_padding(kernel):
    """Zero padding (before, after); symmetric (k-1)/2 for odd kernels."""
    return (kernel - 1) // 2, kernel // 2


def conv_output_extent(extent, kernel, stride):
    before, after = conv_padding(kernel)
    return (extent + before + after - kernel) // stride + 1


def _windows(padded, kernel, stride, out_h, out_w):
    win = np.lib.stride_tricks.sliding_window_view(
        padded, (kernel, kernel), axis=(2, 3)
    )
    return win[:, :, ::stride, ::stride][:, :, :out_h, :out_w]


def conv2d_forward(x, w, b=None, stride=1):
    """Cross-correlation of N x Cin x H x W with Cout x Cin x k x k, plain arrays.

    Returns the output and the padded-input windows reused by the backward pass.
    """
    if x.ndim != 4 or w.ndim != 4:
        raise ShapeError(
            f"conv2d expects 4-D input and kernel, got {x.shape} and {w.shape}"
        )
    if x.shape[1] != w.shape[1]:
        raise ShapeError(
            f"conv2d channel mismatch: input has {x.shape[1]}, "
            f"kernel expects {w.shape[1]}"
        )
    if w.shape[2] != w.shape[3]:
        raise ShapeError(f"conv2d kernels must be square, got {w.shape[2:]}")
    if stride not in (1, 2):
        raise ShapeError(f"conv2d stride must be 1 or 2, got {stride}")
    kernel = w.shape[2]
    before, after = conv_padding(kernel)
    out_h = conv_output_extent(x.shape[2], kernel, stride)
    out_w = conv_output_extent(x.shape[3], kernel, stride)
    padded = np.pad(x, ((0, 0), (0, 0), (before, after), (before, after)))
    win = _windows(padded, kernel, stride, out_h, out_w)
    out = np.tensordot(win, w, axes=([1, 4, 5], [1, 2, 3])).transpose(0, 3, 1, 2)
    if b is not None:
        out = out + b[None, :, None, None]
    return np.ascontiguousarray(out), win


def conv2d(x, w, b=None, stride=1):
    tape = _tape_of(x, w)
    x, w = tape.lift(x), tape.lift(w)
    inputs = (x, w) if b is None else (x, w, tape.lift(b))
    bias = None if b is None else inputs[2].value
    out, win = conv2d_forward(x.value, w.value, bias, stride)
    kernel = w.shape[2]
    before, after = conv_padding(kernel)
    n, channels, height, width = x.shape
    out_h, out_w = out.shape[2], out.shape[3]

    def back(g):
        grad_w = np.tensordot(g, win, axes=([0, 2, 3], [0, 2, 3]))
        grad_x = None
        if x.requires_grad:
            extent = before + after
            padded = np.zeros((n, channels, height + extent, width + extent))
            for i in range(kernel):
                for j in range(kernel):
                    contrib = np.tensordot(g, w.value[:, :, i, j], axes=([1], [0]))
                    rows = slice(i, i + stride * out_h, stride)
                    cols = slice(j, j + stride * out_w, stride)
                    padded[:, :, rows, cols] += contrib.transpose(0, 3, 1, 2)
            grad_x = padded[:, :, before : before + height, before : before + width]
        grads = (grad_x, grad_w)
        if b is not None:
            grads += (g.sum(axis=(0, 2, 3)),)
        return grads

    return tape.record("conv2d", out, inputs, back)


# complex-valued plumbing on (..., 2, H, W) pairs


def _to_complex(pairs):
    return pairs[..., 0, :, :] + 1j * pairs[..., 1, :, :]


def _to_pairs(z):
    return np.stack([z.real, z.imag], axis=-3)


def _check_pairs(x):
    if x.value.ndim < 3 or x.shape[-3] != 2:
        raise ShapeError(f"expected a (..., 2, H, W) real/imag pair, got {x.shape}")


def fft2(x):
    """Centered unitary FFT of a real/imag pair tensor."""
    _check_pairs(x)
    out = _to_pairs(fft2c(_to_complex(x.value)))
    return x.tape.record(
        "fft2", out, (x,), lambda g: (_to_pairs(ifft2c(_to_complex(g))),)
    )


def ifft2(x):
    _check_pairs(x)
    out = _to_pairs(ifft2c(_to_complex(x.value)))
    return x.tape.record(
        "ifft2", out, (x,), lambda g: (_to_pairs(fft2c(_to_complex(g))),)
    )


def complex_abs(x):
    """Magnitude of a pair tensor, keeping a singleton channel on axis -3."""
    _check_pairs(x)
    re, im = x.value[..., 0, :, :], x.value[..., 1, :, :]
    mag = np.hypot(re, im)
    safe = np.where(mag > 0, mag, 1.0)
    nonzero = mag > 0

    def back(g):
        g = g[..., 0, :, :]
        return (np.stack([g * re / safe * nonzero, g * im / safe * nonzero], axis=-3),)

    return x.tape.record("complex_abs", mag[..., None, :, :], (x,), back)


def coil_expand(x, maps):
    """Multiply an N x 2 x H x W image by complex coil maps.

    ``maps`` is a complex array of shape (N, C, H, W) or (C, H, W); the result
    is N x C x 2 x H x W.
    """
    _check_pairs(x)
    maps = np.asarray(maps)
    if maps.ndim == 3:
        maps = np.broadcast_to(maps, (x.shape[0],) + maps.shape)
    z = _to_complex(x.value)
    if maps.shape[0] != z.shape[0] or maps.shape[2:] != z.shape[1:]:
        raise ShapeError(f"coil maps {maps.shape} do not match image {x.shape}")
    out = _to_pairs(maps * z[:, None])

    def back(g):
        return (_to_pairs(np.sum(np.conj(maps) * _to_complex(g), axis=1)),)

    return x.tape.record("coil_expand", out, (x,), back)
