"""Reconstruct a dataset split with ZF, CG-SENSE or a trained generator."""
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from apps.corecode.defaults import site_defaults
from apps.corecode.exceptions import ConfigurationError, IncompatibleCheckpointError
from apps.corecode.utils import write_json
from apps.encoding.cgsense import cg_sense
from apps.encoding.operators import adjoint_decode, forward_encode
from apps.metrics.pgm import image_names, write_pgm
from apps.network.generator import generator_forward
from apps.training.loops import noise_seed

logger = logging.getLogger(__name__)

METHODS = ("zf", "cgsense", "gan")
RECONSTRUCTION_JSON = "reconstruction.json"


@dataclass
class Reconstruction:
    index: int
    image: np.ndarray
    reference: np.ndarray
    info: Dict = field(default_factory=dict)
    roi: Optional[np.ndarray] = None


@dataclass
class ReconstructionSettings:
    method: str = "zf"
    noise_sigma: float = 0.0
    seed: int = 0
    cg_lambda: float = 1e-3
    cg_max_iters: int = 50
    cg_tol: float = 1e-6

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigurationError(
                f"unknown method {self.method!r}, expected one of {METHODS}"
            )

    @classmethod
    def from_defaults(cls, method, **overrides):
        site = site_defaults()
        values = {
            "method": method,
            "noise_sigma": site["noise_sigma"],
            "cg_lambda": site["cg_lambda"],
            "cg_max_iters": site["cg_max_iters"],
            "cg_tol": site["cg_tol"],
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def check_model_fits(params, dataset):
    if params.config is not None and params.config.coils != dataset.coils:
        raise IncompatibleCheckpointError(
            f"checkpoint expects {params.config.coils} coils, "
            f"dataset has {dataset.coils}",
            name="gen.enc1.down.w",
        )


def reconstruct_sample(sample, mask, settings, params=None):
    """Magnitude reconstruction of one sample; returns a Reconstruction."""
    kspace = forward_encode(
        sample.image,
        sample.sens,
        mask,
        noise_sigma=settings.noise_sigma,
        seed=noise_seed(settings.seed, 0, sample.index),
    )
    info = {}
    if settings.method == "cgsense":
        result = cg_sense(
            kspace,
            sample.sens,
            mask,
            lam=settings.cg_lambda,
            max_iters=settings.cg_max_iters,
            tol=settings.cg_tol,
        )
        image = result.image
        info = result.metadata()
    else:
        image = adjoint_decode(kspace, sample.sens)
        if settings.method == "gan":
            image = generator_forward(params, image, sample.sens)
    return Reconstruction(
        sample.index, image.magnitude(), sample.image.magnitude(), info, sample.roi
    )


def reconstruct_dataset(dataset, mask, settings, params=None):
    if settings.method == "gan":
        if params is None:
            raise ConfigurationError("the gan method needs a checkpoint")
        check_model_fits(params, dataset)
    results = [reconstruct_sample(s, mask, settings, params) for s in dataset.samples]
    logger.info(
        "reconstructed %d %s samples with %s (af=%s)",
        len(results),
        dataset.split,
        settings.method,
        mask.af,
    )
    return results


def write_reconstructions(out_dir, results, description):
    """Recon, reference and |error| PGMs per sample plus reconstruction.json."""
    os.makedirs(out_dir, exist_ok=True)
    for result in results:
        names = image_names(result.index)
        write_pgm(os.path.join(out_dir, names["recon"]), result.image)
        write_pgm(os.path.join(out_dir, names["gt"]), result.reference)
        write_pgm(
            os.path.join(out_dir, names["error"]),
            np.abs(np.clip(result.image, 0.0, 1.0) - result.reference),
        )
    payload = dict(description)
    payload["samples"] = [{"index": r.index, **r.info} for r in results]
    write_json(os.path.join(out_dir, RECONSTRUCTION_JSON), payload)
