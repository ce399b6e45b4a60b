"""Adversarial training of the refinement generator.

Each batch runs one discriminator update followed by one generator update,
both with Adam under a per-epoch learning-rate schedule.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from apps.corecode.exceptions import (
    ConfigurationError,
    DivergenceError,
    IncompatibleCheckpointError,
)
from apps.encoding.operators import zero_filled
from apps.metrics.quality import psnr
from apps.network.discriminator import discriminator_logits
from apps.network.generator import generator_graph
from apps.network.layers import bind
from apps.network.params import check_fingerprint, expected_fingerprint, init_params
from apps.numerics import ops
from apps.numerics.autodiff import Tape, backward
from apps.numerics.optim import AdamState, adam_step

from .losses import (
    LossTerms,
    loss_disc_logits,
    loss_fmae_m,
    loss_fmae_notm,
    loss_gen_logits,
    loss_imae,
    total_generator_loss,
)

logger = logging.getLogger(__name__)


@dataclass
class EpochRecord:
    epoch: int
    lr: float
    gen: float
    imae: float
    fmae_m: float
    fmae_notm: float
    disc: float
    val_psnr: Optional[float] = None


@dataclass
class TrainReport:
    """Per-epoch trace of a run. ``wall_time`` is excluded from equality."""

    epochs: List[EpochRecord] = field(default_factory=list)
    best_epoch: Optional[int] = None
    best_val_psnr: Optional[float] = None
    checkpoints: List[int] = field(default_factory=list)
    wall_time: float = field(default=0.0, compare=False)

    @property
    def lr_trace(self):
        return [record.lr for record in self.epochs]

    @property
    def val_psnr_trace(self):
        return [r.val_psnr for r in self.epochs if r.val_psnr is not None]

    def summary(self):
        last = self.epochs[-1] if self.epochs else None
        return {
            "epochs": len(self.epochs),
            "best_epoch": self.best_epoch,
            "best_val_psnr": self.best_val_psnr,
            "final_generator_loss": None if last is None else last.gen,
            "final_discriminator_loss": None if last is None else last.disc,
            "checkpoints": list(self.checkpoints),
        }


@dataclass
class PreparedBatch:
    """Arrays fed to one update: ZF pairs, targets, complex maps, mask rows."""

    zero_filled: np.ndarray
    target: np.ndarray
    maps: np.ndarray
    rows: np.ndarray


def noise_seed(seed, epoch, index):
    sequence = np.random.SeedSequence([int(seed), int(epoch), int(index)])
    return int(sequence.generate_state(1)[0])


def prepare_samples(samples, mask, noise_sigma=0.0, seed=0, epoch=0):
    """Simulate measurements under ``mask`` and stack the network inputs."""
    zf, targets, maps = [], [], []
    for sample in samples:
        x_u, _ = zero_filled(
            sample.image,
            sample.sens,
            mask,
            noise_sigma=noise_sigma,
            seed=noise_seed(seed, epoch, sample.index),
        )
        zf.append(x_u.to_planes())
        targets.append(sample.image.to_planes())
        maps.append(sample.sens.maps)
    return PreparedBatch(
        np.stack(zf), np.stack(targets), np.stack(maps), mask.rows.copy()
    )


def _batch(prepared, picks):
    return PreparedBatch(
        prepared.zero_filled[picks],
        prepared.target[picks],
        prepared.maps[picks],
        prepared.rows,
    )


def _magnitude(pairs):
    return np.hypot(pairs[:, 0], pairs[:, 1])[:, None]


def discriminator_step(params, state, batch, lr):
    """Update the discriminator on real targets and detached reconstructions."""
    infer = Tape(enabled=False)
    fake = generator_graph(
        bind(infer, params.generator(), trainable=False),
        infer.constant(batch.zero_filled),
        batch.maps,
    ).value

    tape = Tape()
    disc = bind(tape, params.discriminator(), trainable=True)
    logit_real = discriminator_logits(disc, tape.constant(_magnitude(batch.target)))
    logit_fake = discriminator_logits(disc, tape.constant(_magnitude(fake)))
    loss = loss_disc_logits(logit_real, logit_fake)
    grads = {node.name: grad for node, grad in backward(tape, loss).items()}
    updated = adam_step(state, params.discriminator(), grads, learning_rate=lr)
    return params.replace(updated), float(loss.value)


def generator_step(params, state, batch, lr, weights, verbatim=False):
    """Update the generator against the composite objective; returns loss terms."""
    tape = Tape()
    gen = bind(tape, params.generator(), trainable=True)
    disc = bind(tape, params.discriminator(), trainable=False)
    x_hat = generator_graph(gen, tape.constant(batch.zero_filled), batch.maps)
    x_t = tape.constant(batch.target)
    terms = LossTerms(
        gen=loss_gen_logits(discriminator_logits(disc, ops.complex_abs(x_hat))),
        imae=loss_imae(x_hat, x_t, batch.maps, verbatim=verbatim),
        fmae_m=loss_fmae_m(x_hat, x_t, batch.maps, batch.rows, verbatim=verbatim),
        fmae_notm=loss_fmae_notm(x_hat, x_t, batch.maps, batch.rows, verbatim=verbatim),
    )
    loss = total_generator_loss(terms, weights)
    grads = {node.name: grad for node, grad in backward(tape, loss).items()}
    updated = adam_step(state, params.generator(), grads, learning_rate=lr)
    return params.replace(updated), terms.values(), float(loss.value)


def validation_psnr(params, prepared):
    """Mean PSNR of reconstructed magnitudes, clipped to [0, 1], over a split."""
    if prepared is None or prepared.target.shape[0] == 0:
        return None
    infer = Tape(enabled=False)
    p = bind(infer, params.generator(), trainable=False)
    scores = []
    for picks in range(prepared.target.shape[0]):
        batch = _batch(prepared, [picks])
        x_hat = generator_graph(p, infer.constant(batch.zero_filled), batch.maps).value
        recon = np.clip(_magnitude(x_hat)[0, 0], 0.0, 1.0)
        scores.append(psnr(recon, _magnitude(batch.target)[0, 0]))
    return float(np.mean(scores))


def _check_finite(values, epoch, step):
    bad = [name for name, value in values.items() if not np.isfinite(value)]
    if bad:
        raise DivergenceError(
            f"non-finite {', '.join(bad)} at epoch {epoch}, step {step}",
            epoch=epoch,
            step=step,
        )


def _check_compatible(train_set, mask_cfg, gen_cfg):
    if train_set.coils != gen_cfg.coils:
        raise IncompatibleCheckpointError(
            f"dataset has {train_set.coils} coils "
            f"but the generator expects {gen_cfg.coils}",
            name="gen.enc1.down.w",
        )
    if mask_cfg.acs > train_set.size:
        raise ConfigurationError(
            f"ACS block of {mask_cfg.acs} exceeds height {train_set.size}"
        )


def train(
    train_set, mask_cfg, gen_cfg, train_cfg, init=None, val_set=None, on_checkpoint=None
):
    """Train generator and discriminator; returns (best params, TrainReport).

    Without ``init`` both networks start from seeded He-normal weights.
    ``on_checkpoint(epoch, params, report)`` fires after each epoch listed in
    ``train_cfg.checkpoint_epochs`` (one-based). The returned params are those
    of the epoch with the highest validation PSNR, or the last epoch when no
    validation ran.
    """
    started = time.perf_counter()
    if init is None:
        params = init_params(gen_cfg, seed=train_cfg.seed)
    else:
        check_fingerprint(init.fingerprint(), expected_fingerprint(gen_cfg))
        params = init.copy()
        params.config = gen_cfg
    _check_compatible(train_set, mask_cfg, gen_cfg)
    report = TrainReport()
    if train_cfg.epochs == 0:
        logger.info("zero-epoch run: returning the initial parameters unchanged")
        return params, report

    size = train_set.size
    adam = dict(
        beta1=train_cfg.adam_beta1, beta2=train_cfg.adam_beta2, eps=train_cfg.adam_eps
    )
    lr0 = train_cfg.learning_rate
    gen_state = AdamState.for_params(params.generator(), lr0, **adam)
    disc_state = AdamState.for_params(params.discriminator(), lr0, **adam)
    shuffler = np.random.default_rng(np.random.SeedSequence([train_cfg.seed, 1]))
    weights = train_cfg.loss_weights

    width = train_set.metadata.get("W", size)
    mask = mask_cfg.build(size, width)
    prepared = prepare_samples(
        train_set.samples, mask, train_cfg.noise_sigma, train_cfg.seed
    )
    val_prepared = None
    if val_set is not None and len(val_set):
        val_prepared = prepare_samples(val_set.samples, mask, 0.0, train_cfg.seed)
    best = params.copy()

    logger.info(
        "training %d epochs on %d samples (batch %d, lr %g, af %s)",
        train_cfg.epochs,
        len(train_set),
        train_cfg.batch_size,
        lr0,
        mask.af,
    )
    for epoch in range(train_cfg.epochs):
        if mask_cfg.regenerate_each_epoch and epoch > 0:
            mask = mask_cfg.build(size, width, epoch)
            prepared = prepare_samples(
                train_set.samples, mask, train_cfg.noise_sigma, train_cfg.seed, epoch
            )
        elif train_cfg.noise_sigma > 0 and epoch > 0:
            prepared = prepare_samples(
                train_set.samples, mask, train_cfg.noise_sigma, train_cfg.seed, epoch
            )
        lr = train_cfg.learning_rate_at(epoch)
        order = shuffler.permutation(len(train_set))
        sums = dict.fromkeys(("gen", "imae", "fmae_m", "fmae_notm", "disc"), 0.0)
        steps = 0
        for step, start in enumerate(range(0, len(order), train_cfg.batch_size)):
            batch = _batch(prepared, order[start : start + train_cfg.batch_size])
            params, disc_loss = discriminator_step(params, disc_state, batch, lr)
            params, terms, total = generator_step(
                params,
                gen_state,
                batch,
                lr,
                weights,
                train_cfg.verbatim_sensitivity_terms,
            )
            _check_finite(dict(terms, disc=disc_loss, total=total), epoch + 1, step)
            for name, value in terms.items():
                sums[name] += value
            sums["disc"] += disc_loss
            steps += 1

        means = {k: v / max(steps, 1) for k, v in sums.items()}
        record = EpochRecord(epoch=epoch + 1, lr=lr, **means)
        if val_prepared is not None and (
            (epoch + 1) % train_cfg.validate_every == 0 or epoch + 1 == train_cfg.epochs
        ):
            record.val_psnr = validation_psnr(params, val_prepared)
            if report.best_val_psnr is None or record.val_psnr > report.best_val_psnr:
                report.best_val_psnr = record.val_psnr
                report.best_epoch = epoch + 1
                best = params.copy()
        report.epochs.append(record)
        logger.info(
            "epoch %d/%d lr=%.3g gen=%.4f imae=%.4f fM=%.4f fnotM=%.4f disc=%.4f "
            "val_psnr=%s",
            epoch + 1,
            train_cfg.epochs,
            lr,
            record.gen,
            record.imae,
            record.fmae_m,
            record.fmae_notm,
            record.disc,
            record.val_psnr,
        )
        if epoch + 1 in train_cfg.checkpoint_epochs:
            report.checkpoints.append(epoch + 1)
            if on_checkpoint is not None:
                on_checkpoint(epoch + 1, params, report)

    if val_prepared is None:
        report.best_epoch = train_cfg.epochs
        best = params
    report.wall_time = time.perf_counter() - started
    logger.info(
        "training finished in %.1fs, best epoch %s (val PSNR %s)",
        report.wall_time,
        report.best_epoch,
        report.best_val_psnr,
    )
    return best, report


def finetune(
    train_set, mask_cfg, gen_cfg, train_cfg, init, val_set=None, on_checkpoint=None
):
    """Transfer learning: :func:`train` from pretrained weights."""
    if init is None:
        raise ConfigurationError("fine-tuning needs pretrained parameters")
    return train(
        train_set,
        mask_cfg,
        gen_cfg,
        train_cfg,
        init=init,
        val_set=val_set,
        on_checkpoint=on_checkpoint,
    )
