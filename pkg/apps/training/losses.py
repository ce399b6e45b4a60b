"""Composite generator objective and the adversarial losses.

All functions take and return tape nodes. Image tensors are N x 2 x H x W
real/imag pairs; ``maps`` are complex N x C x H x W coil sensitivities.
"""
from dataclasses import dataclass
from typing import Any

import numpy as np

from apps.corecode.exceptions import DomainError, ShapeError
from apps.numerics import ops


@dataclass
class LossTerms:
    """The four generator terms; fields may hold nodes or plain floats."""

    gen: Any
    imae: Any
    fmae_m: Any
    fmae_notm: Any

    def values(self):
        """Plain float value of every term."""
        return {name: _scalar(getattr(self, name)) for name in TERM_NAMES}


TERM_NAMES = ("gen", "imae", "fmae_m", "fmae_notm")


def _scalar(term):
    return float(np.asarray(getattr(term, "value", term)))


def _check_pair(x_hat, x_t):
    if x_hat.shape != x_t.shape:
        raise ShapeError(f"reconstruction {x_hat.shape} and target {x_t.shape} differ")


def _coil_images(x_hat, x_t, maps):
    """Coil-weighted estimate S x_hat and the bare target repeated per coil.

    Both come back as N x C x 2 x H x W tensors; the target is not weighted.
    """
    expanded = ops.coil_expand(x_hat, maps)
    target = np.broadcast_to(x_t.value[:, None], expanded.shape)
    return expanded, x_hat.tape.constant(np.ascontiguousarray(target))


def loss_imae(x_hat, x_t, maps=None, verbatim=False):
    """Mean absolute image-domain error over real and imaginary parts.

    With ``verbatim`` the coil-weighted estimate S x_hat is compared with the
    unweighted target x_t, so even a perfect estimate keeps a residual
    wherever S differs from one.
    """
    _check_pair(x_hat, x_t)
    if verbatim:
        x_hat, x_t = _coil_images(x_hat, x_t, maps)
    return ops.mean(ops.absolute(ops.sub(x_hat, x_t)))


def _masked_kspace_mae(x_hat, x_t, maps, rows, verbatim):
    _check_pair(x_hat, x_t)
    if verbatim:
        x_hat, x_t = _coil_images(x_hat, x_t, maps)
    rows = np.asarray(rows, dtype=np.float64)
    if rows.shape[0] != x_hat.shape[-2]:
        raise ShapeError(
            f"mask of {rows.shape[0]} rows does not fit images {x_hat.shape}"
        )
    weight = np.broadcast_to(rows[:, None], x_hat.shape)
    count = float(weight.sum())
    if count == 0:
        return x_hat.tape.constant(0.0)
    diff = ops.absolute(ops.sub(ops.fft2(x_hat), ops.fft2(x_t)))
    masked = ops.mul(diff, np.ascontiguousarray(weight))
    return ops.scale(ops.total(masked), 1.0 / count)


def loss_fmae_m(x_hat, x_t, maps, mask, verbatim=False):
    """Mean absolute k-space error on the sampled rows of ``mask``.

    ``mask`` is a :class:`SamplingMask` or a boolean row vector. The maps only
    enter when ``verbatim`` compares per-coil spectra F S x_hat with F x_t.
    """
    return _masked_kspace_mae(x_hat, x_t, maps, _rows(mask), verbatim)


def loss_fmae_notm(x_hat, x_t, maps, mask, verbatim=False):
    """Mean absolute k-space error on the unsampled rows; zero when there are none."""
    return _masked_kspace_mae(x_hat, x_t, maps, ~_rows(mask), verbatim)


def _rows(mask):
    rows = getattr(mask, "rows", mask)
    return np.asarray(rows, dtype=bool)


def _check_probabilities(d, label):
    value = np.asarray(d.value)
    if np.any(value <= 0) or np.any(value >= 1):
        raise DomainError(f"{label} must lie strictly inside (0, 1)")


def loss_gen(d_fake):
    """-log D(x_hat), averaged over the batch."""
    _check_probabilities(d_fake, "D(x_hat)")
    return ops.scale(ops.mean(ops.log(d_fake)), -1.0)


def loss_disc(d_real, d_fake):
    """-log D(x_t) - log(1 - D(x_hat)), averaged over the batch."""
    _check_probabilities(d_real, "D(x_t)")
    _check_probabilities(d_fake, "D(x_hat)")
    real = ops.mean(ops.log(d_real))
    fake = ops.mean(ops.log(ops.sub(1.0, d_fake)))
    return ops.scale(ops.add(real, fake), -1.0)


def loss_gen_logits(logit_fake):
    """:func:`loss_gen` written on logits: -log sigmoid(z) = softplus(-z)."""
    return ops.mean(ops.softplus(ops.scale(logit_fake, -1.0)))


def loss_disc_logits(logit_real, logit_fake):
    """:func:`loss_disc` on logits; finite for any logit value."""
    real = ops.mean(ops.softplus(ops.scale(logit_real, -1.0)))
    fake = ops.mean(ops.softplus(logit_fake))
    return ops.add(real, fake)


def total_generator_loss(terms, weights):
    """L_GEN + alpha L_iMAE + beta L_fMAE_M + gamma L_fMAE_notM."""
    return (
        terms.gen
        + weights.alpha * terms.imae
        + weights.beta * terms.fmae_m
        + weights.gamma * terms.fmae_notm
    )
