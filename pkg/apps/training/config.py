import json
import logging
from dataclasses import asdict, dataclass, field, fields
from typing import List

from apps.corecode.defaults import site_defaults
from apps.corecode.exceptions import ConfigurationError
from apps.encoding.masks import MaskConfig

logger = logging.getLogger(__name__)

SCHEDULES = ("linear", "constant")


@dataclass(frozen=True)
class LossWeights:
    alpha: float = 1.0
    beta: float = 10.0
    gamma: float = 10.0

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ConfigurationError(f"loss weights must be nonnegative, got {self}")


@dataclass(frozen=True)
class TrainConfig:
    """Everything that determines a training run besides data and architecture."""

    epochs: int = 60
    batch_size: int = 4
    learning_rate: float = 1e-4
    schedule: str = "linear"
    seed: int = 0
    validate_every: int = 1
    af: float = 4.0
    acs: int = 8
    mask_seed: int = 0
    regenerate_mask_each_epoch: bool = False
    noise_sigma: float = 0.0
    checkpoint_epochs: List[int] = field(default_factory=list)
    alpha: float = 1.0
    beta: float = 10.0
    gamma: float = 10.0
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    verbatim_sensitivity_terms: bool = False

    def __post_init__(self):
        if self.epochs < 0:
            raise ConfigurationError(f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigurationError(f"batch size must be >= 1, got {self.batch_size}")
        if self.learning_rate < 0:
            raise ConfigurationError(
                f"learning rate must be >= 0, got {self.learning_rate}"
            )
        if self.schedule not in SCHEDULES:
            raise ConfigurationError(
                f"schedule must be one of {SCHEDULES}, got {self.schedule!r}"
            )
        if self.validate_every < 1:
            raise ConfigurationError("validate_every must be >= 1")
        epochs = sorted({int(e) for e in self.checkpoint_epochs})
        object.__setattr__(self, "checkpoint_epochs", epochs)
        bad = [e for e in self.checkpoint_epochs if not 1 <= e <= max(self.epochs, 1)]
        if bad:
            raise ConfigurationError(
                f"checkpoint epochs {bad} fall outside 1..{self.epochs}"
            )

    @property
    def loss_weights(self):
        return LossWeights(self.alpha, self.beta, self.gamma)

    def mask_config(self):
        return MaskConfig(
            af=self.af,
            acs=self.acs,
            seed=self.mask_seed,
            regenerate_each_epoch=self.regenerate_mask_each_epoch,
        )

    def learning_rate_at(self, epoch):
        """Rate used during zero-based ``epoch``.

        The linear schedule is lr0 (1 - t / epochs) sampled at the start of each
        epoch: it reaches zero when the budget ends, so the last epoch still
        trains at lr0 / epochs.
        """
        if self.schedule == "constant" or self.epochs == 0:
            return self.learning_rate
        return self.learning_rate * (1.0 - epoch / self.epochs)

    def schedule_summary(self):
        """Endpoints of the schedule, written into the run report."""
        final = self.learning_rate_at(max(self.epochs - 1, 0))
        zero_at = self.epochs if self.schedule == "linear" and self.epochs else None
        return {
            "kind": self.schedule,
            "initial": self.learning_rate,
            "final_epoch_rate": final,
            "zero_at_epoch": zero_at,
        }

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown training config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path):
        try:
            with open(path, encoding="utf8") as fh:
                return cls.from_dict(json.load(fh))
        except OSError as exc:
            raise ConfigurationError(
                f"cannot read training config {path}: {exc}"
            ) from exc

    @classmethod
    def from_defaults(cls, kind="pretrain", scale="desk", base=None, **overrides):
        """Config seeded from the project settings, then ``base`` (a JSON
        config dict), then non-None ``overrides``."""
        site = site_defaults(scale)
        values = {
            "epochs": site[f"{kind}_epochs"],
            "batch_size": site["batch_size"],
            "learning_rate": site["learning_rate"],
            "validate_every": site["validate_every"],
            "af": site["af"],
            "acs": site["acs"],
            "noise_sigma": site["noise_sigma"],
            "alpha": site["alpha"],
            "beta": site["beta"],
            "gamma": site["gamma"],
            "adam_beta1": site["adam_beta1"],
            "adam_beta2": site["adam_beta2"],
            "adam_eps": site["adam_eps"],
        }
        values.update(base or {})
        values.update({k: v for k, v in overrides.items() if v is not None})
        if kind == "finetune" and "checkpoint_epochs" not in values:
            values["checkpoint_epochs"] = sweep_epochs(values["epochs"])
        return cls.from_dict(values)


def sweep_epochs(budget, fractions=(0.2, 0.4, 0.6, 0.8, 1.0)):
    """Checkpoint epochs at fixed fractions of a fine-tune budget."""
    if budget <= 0:
        return []
    return sorted({max(1, int(round(f * budget))) for f in fractions})
