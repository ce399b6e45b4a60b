"""Experiment recipes: a JSON file that fully determines a transfer study."""
import json
from dataclasses import asdict, dataclass, field, fields
from typing import List

from apps.corecode.exceptions import ConfigurationError
from apps.phantoms.generators import DOMAINS

SCENARIOS = ("tumor-transfer", "anatomy-transfer", "af-transfer")


@dataclass(frozen=True)
class DataSpec:
    domain: str
    n_train: int
    n_val: int
    n_test: int
    seed: int = 0

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ConfigurationError(f"unknown domain {self.domain!r}")


@dataclass(frozen=True)
class ExperimentRecipe:
    """One transfer scenario: source pretraining, target arms, seeds.

    Every pretrain AF is fine-tuned to ``target_af``; Directly Trained starts
    from scratch on the target training split with ``direct_epochs``.
    """

    name: str
    source: DataSpec
    target: DataSpec
    pretrain_afs: List[float] = field(default_factory=lambda: [4.0])
    target_af: float = 4.0
    acs: int = 8
    size: int = 64
    coils: int = 4
    base_width: int = 32
    bottleneck_width: int = 16
    batch_size: int = 4
    learning_rate: float = 1e-4
    pretrain_epochs: int = 60
    finetune_epochs: int = 30
    direct_epochs: int = 30
    mask_seed: int = 0
    seeds: List[int] = field(default_factory=lambda: [0, 1, 2])

    def __post_init__(self):
        if self.name not in SCENARIOS:
            raise ConfigurationError(
                f"unknown scenario {self.name!r}, expected one of {SCENARIOS}"
            )
        if not self.pretrain_afs or not self.seeds:
            raise ConfigurationError(
                "a recipe needs at least one pretrain AF and one seed"
            )

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown recipe keys: {sorted(unknown)}")
        data = dict(data)
        for key in ("source", "target"):
            if key not in data:
                raise ConfigurationError(f"recipe is missing {key!r}")
            data[key] = DataSpec(**data[key])
        return cls(**data)

    @classmethod
    def from_json(cls, path):
        try:
            with open(path, encoding="utf8") as fh:
                return cls.from_dict(json.load(fh))
        except OSError as exc:
            raise ConfigurationError(f"cannot read recipe {path}: {exc}") from exc

    def to_dict(self):
        return asdict(self)
