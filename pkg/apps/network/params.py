import logging
from collections import OrderedDict
from dataclasses import asdict, dataclass

import numpy as np

from apps.corecode.exceptions import ConfigurationError, IncompatibleCheckpointError

logger = logging.getLogger(__name__)

GENERATOR_PREFIX = "gen."
DISCRIMINATOR_PREFIX = "disc."
DEPTH = 4
# each encoder halves the grid
EXTENT_DIVISOR = 2**DEPTH


@dataclass(frozen=True)
class GeneratorConfig:
    """Widths of the residual U-Net; the discriminator reuses them."""

    coils: int
    base_width: int = 64
    bottleneck_width: int = 32

    def __post_init__(self):
        if self.coils < 1 or self.base_width < 1 or self.bottleneck_width < 1:
            raise ConfigurationError(f"invalid generator config {self}")

    @property
    def in_channels(self):
        return 2 + 2 * self.coils

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigurationError(
                f"unknown generator config keys: {sorted(unknown)}"
            )
        return cls(**data)


def _conv_spec(name, cin, cout, kernel=3):
    return [(f"{name}.w", (cout, cin, kernel, kernel)), (f"{name}.b", (cout,))]


def _residual_spec(prefix, width, bottleneck):
    return (
        _conv_spec(f"{prefix}.conv0", width, width)
        + _conv_spec(f"{prefix}.conv1", width, bottleneck)
        + _conv_spec(f"{prefix}.conv2", bottleneck, width)
    )


def _encoder_spec(prefix, cin, width, bottleneck):
    return (
        _conv_spec(f"{prefix}.down", cin, width)
        + _residual_spec(f"{prefix}.res", width, bottleneck)
        + _conv_spec(f"{prefix}.out", width, width)
    )


def generator_layout(config):
    """Ordered (name, shape) list of the generator's tensors."""
    base, neck, cin = config.base_width, config.bottleneck_width, config.in_channels
    spec = []
    for i in range(1, DEPTH + 1):
        spec += _encoder_spec(f"gen.enc{i}", cin if i == 1 else base, base, neck)
    skips = [base] * (DEPTH - 1) + [cin]
    for i, skip in enumerate(skips, start=1):
        spec += _conv_spec(f"gen.dec{i}.in", base + skip, base)
        spec += _residual_spec(f"gen.dec{i}.res", base, neck)
        spec += _conv_spec(f"gen.dec{i}.out", base, base)
    spec += _conv_spec("gen.final", base, 2)
    return spec


def discriminator_layout(config):
    base, neck = config.base_width, config.bottleneck_width
    spec = _conv_spec("disc.l1", 1, base, 4) + _conv_spec("disc.l2", base, base, 4)
    for i in range(3, 7):
        spec += _encoder_spec(f"disc.enc{i}", base, base, neck)
    spec += _conv_spec("disc.l7", base, 1)
    return spec


def model_layout(config):
    return generator_layout(config) + discriminator_layout(config)


def parameter_count(config, prefix=""):
    return sum(
        int(np.prod(shape))
        for name, shape in model_layout(config)
        if name.startswith(prefix)
    )


class ModelParams:
    """Ordered named weight tensors for the generator and the discriminator."""

    FORMAT_VERSION = 1

    def __init__(self, tensors, config=None):
        self.tensors = OrderedDict(
            (name, np.asarray(v, dtype=np.float64)) for name, v in tensors.items()
        )
        self.config = config

    def __getitem__(self, name):
        return self.tensors[name]

    def __len__(self):
        return len(self.tensors)

    def __iter__(self):
        return iter(self.tensors)

    def items(self):
        return self.tensors.items()

    def fingerprint(self):
        return [[name, list(value.shape)] for name, value in self.tensors.items()]

    def subset(self, prefix):
        return OrderedDict(
            (n, v) for n, v in self.tensors.items() if n.startswith(prefix)
        )

    def generator(self):
        return self.subset(GENERATOR_PREFIX)

    def discriminator(self):
        return self.subset(DISCRIMINATOR_PREFIX)

    def replace(self, updates):
        """A copy with ``updates`` swapped in; names must already exist."""
        unknown = set(updates) - set(self.tensors)
        if unknown:
            raise KeyError(f"unknown parameters {sorted(unknown)[:3]}")
        tensors = OrderedDict(self.tensors)
        tensors.update(updates)
        return ModelParams(tensors, self.config)

    def copy(self):
        tensors = OrderedDict((n, v.copy()) for n, v in self.tensors.items())
        return ModelParams(tensors, self.config)

    def count(self, prefix=""):
        return sum(v.size for n, v in self.tensors.items() if n.startswith(prefix))


def init_params(config, seed=0):
    """He-normal weights (std sqrt(2 / fan_in)) and zero biases, in layout order."""
    rng = np.random.default_rng(seed)
    tensors = OrderedDict()
    for name, shape in model_layout(config):
        if name.endswith(".w"):
            fan_in = shape[1] * shape[2] * shape[3]
            tensors[name] = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=shape)
        else:
            tensors[name] = np.zeros(shape)
    return ModelParams(tensors, config)


def zero_params(config):
    tensors = OrderedDict(
        (name, np.zeros(shape)) for name, shape in model_layout(config)
    )
    return ModelParams(tensors, config)


def check_fingerprint(found, expected):
    """Raise naming the first tensor whose name or shape differs."""
    for position, (want, got) in enumerate(zip(expected, found)):
        if want[0] != got[0] or list(want[1]) != list(got[1]):
            raise IncompatibleCheckpointError(
                f"tensor #{position} mismatch: expected {want[0]} {tuple(want[1])}, "
                f"found {got[0]} {tuple(got[1])}",
                name=want[0],
            )
    if len(found) != len(expected):
        longer = expected if len(expected) > len(found) else found
        name = longer[min(len(found), len(expected))][0]
        raise IncompatibleCheckpointError(
            f"tensor count mismatch: expected {len(expected)}, found {len(found)} "
            f"(first extra: {name})",
            name=name,
        )


def expected_fingerprint(config):
    return [[name, list(shape)] for name, shape in model_layout(config)]
