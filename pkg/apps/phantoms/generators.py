"""Procedural multi-coil phantoms for four anatomy-like domains.

Each domain is a magnitude template normalized to [0, 1] with a smooth random
phase, paired with smooth Gaussian coil profiles normalized to unit power.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from apps.corecode.exceptions import ConfigurationError, DimensionError
from apps.encoding.sensitivities import CoilSensitivities, normalize_maps
from apps.numerics.fft import is_power_of_two
from apps.numerics.tensors import ComplexImage

logger = logging.getLogger(__name__)

DOMAINS = ("brainlike", "tumorlike", "kneelike", "liverlike")


@dataclass(frozen=True)
class PhantomSpec:
    domain: str
    size: int
    coils: int
    seed: int

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ConfigurationError(
                f"unknown phantom domain {self.domain!r}; choose from {DOMAINS}"
            )
        if not is_power_of_two(self.size):
            raise DimensionError(
                f"phantom size must be a power of two, got {self.size}"
            )
        if self.coils < 1:
            raise ConfigurationError(f"coil count must be >= 1, got {self.coils}")


@dataclass(frozen=True)
class Phantom:
    image: ComplexImage
    sens: CoilSensitivities
    roi: Optional[np.ndarray] = None


def _grid(size):
    axis = (np.arange(size) - size / 2 + 0.5) / (size / 2)
    y, x = np.meshgrid(axis, axis, indexing="ij")
    return x, y


def _rotate(x, y, cx, cy, theta):
    dx, dy = x - cx, y - cy
    c, s = np.cos(theta), np.sin(theta)
    return c * dx + s * dy, -s * dx + c * dy


def _ellipse(x, y, cx, cy, a, b, theta=0.0):
    xr, yr = _rotate(x, y, cx, cy, theta)
    return (xr / a) ** 2 + (yr / b) ** 2 <= 1.0


def _bias_field(rng, x, y, strength=0.15):
    a, b, c = rng.uniform(-1.0, 1.0, size=3)
    return 1.0 + strength * (a * x + b * y + c * x * y) / 3.0


def _brain(rng, x, y):
    theta = rng.uniform(-0.2, 0.2)
    sx, sy = rng.uniform(0.92, 1.05, size=2)
    img = np.zeros_like(x)
    img[_ellipse(x, y, 0, 0, 0.86 * sx, 0.74 * sy, theta)] = 0.9
    img[_ellipse(x, y, 0, 0, 0.80 * sx, 0.68 * sy, theta)] = 0.3
    brain = _ellipse(x, y, 0, 0, 0.76 * sx, 0.64 * sy, theta)
    img[brain] = 0.55
    img[_ellipse(x, y, 0, 0.02, 0.58 * sx, 0.46 * sy, theta)] = 0.75
    for side in (-1, 1):
        ventricle = _ellipse(
            x, y, side * 0.1 * sx, 0.05, 0.06, 0.2 * sy, theta + side * 0.3
        )
        img[ventricle] = 0.2
    for _ in range(rng.integers(2, 5)):
        cx, cy = rng.uniform(-0.45, 0.45, size=2)
        a, b = rng.uniform(0.05, 0.14, size=2)
        lesion = _ellipse(x, y, cx * sx, cy * sy, a, b, rng.uniform(0, np.pi))
        img[lesion] = rng.uniform(0.45, 0.85)
    return img * _bias_field(rng, x, y), brain


def _tumor(rng, x, y):
    img, brain = _brain(rng, x, y)
    roi = np.zeros_like(brain)
    for _ in range(rng.integers(1, 4)):
        radius = rng.uniform(0.06, 0.14)
        angle, dist = rng.uniform(0, 2 * np.pi), rng.uniform(0.0, 0.4)
        cx, cy = dist * np.cos(angle), dist * np.sin(angle)
        d2 = (x - cx) ** 2 + (y - cy) ** 2
        img = img + rng.uniform(0.5, 0.8) * np.exp(-d2 / (2 * radius**2)) * brain
        roi |= (d2 <= (1.5 * radius) ** 2) & brain
    return img, roi


def _knee(rng, x, y):
    support = _ellipse(x, y, 0, 0, rng.uniform(0.7, 0.85), rng.uniform(0.85, 0.95))
    angle = rng.uniform(0, np.pi)
    freq = rng.uniform(3.0, 6.0)
    proj = x * np.cos(angle) + y * np.sin(angle)
    bands = np.floor(freq * (proj + 1.5)).astype(int)
    levels = rng.uniform(0.25, 0.6, size=bands.max() + 1)
    img = np.where(support, levels[bands], 0.0)
    for _ in range(rng.integers(2, 4)):
        cx, cy = rng.uniform(-0.4, 0.4, size=2)
        radius = rng.uniform(0.12, 0.28)
        outer = _ellipse(x, y, cx, cy, radius, radius) & support
        img[outer] = 0.9
        inner = _ellipse(x, y, cx, cy, 0.75 * radius, 0.75 * radius) & support
        img[inner] = rng.uniform(0.5, 0.7)
    return img * _bias_field(rng, x, y, 0.1)


def _liver(rng, x, y):
    body = _ellipse(x, y, 0, 0, 0.95, rng.uniform(0.7, 0.85))
    img = np.where(body, 0.2, 0.0)
    r = np.hypot(x, y)
    phi = np.arctan2(y, x)
    psi = rng.uniform(0, 2 * np.pi)
    edge = 0.62 + 0.08 * np.sin(2 * phi + psi) + 0.04 * np.cos(3 * phi)
    lobe = (r <= edge) & body
    img[lobe] = rng.uniform(0.4, 0.5)
    for _ in range(rng.integers(3, 7)):
        theta = rng.uniform(0, np.pi)
        xr, yr = _rotate(x, y, 0, 0, theta)
        offset, amp = rng.uniform(-0.4, 0.4), rng.uniform(0.05, 0.2)
        omega, phase = rng.uniform(2, 6), rng.uniform(0, 2 * np.pi)
        dist = yr - (offset + amp * np.sin(omega * xr + phase))
        width = rng.uniform(0.015, 0.03)
        img = img + 0.5 * np.exp(-((dist / width) ** 2)) * lobe
    return img * _bias_field(rng, x, y, 0.1)


def _smooth_phase(rng, x, y):
    p = rng.uniform(-1.0, 1.0, size=4)
    return (np.pi / 4) * (p[0] * x + p[1] * y + p[2] * x * y + p[3] * (x**2 - y**2))


def _coil_maps(rng, coils, x, y):
    maps = []
    for coil in range(coils):
        angle = 2 * np.pi * coil / coils + rng.uniform(-0.2, 0.2)
        cx, cy = 1.3 * np.cos(angle), 1.3 * np.sin(angle)
        width = rng.uniform(0.8, 1.1)
        magnitude = np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2 * width**2))
        ramp = 0.3 * (x * np.cos(angle) + y * np.sin(angle))
        phase = rng.uniform(-np.pi, np.pi) + ramp
        maps.append(magnitude * np.exp(1j * phase))
    return normalize_maps(np.stack(maps))


def render_phantom(spec):
    """Phantom image, coil maps and (tumorlike only) the tumor ROI."""
    image_seed, coil_seed = np.random.SeedSequence(spec.seed).spawn(2)
    rng = np.random.default_rng(image_seed)
    x, y = _grid(spec.size)
    roi = None
    if spec.domain == "brainlike":
        magnitude, _ = _brain(rng, x, y)
    elif spec.domain == "tumorlike":
        magnitude, roi = _tumor(rng, x, y)
    elif spec.domain == "kneelike":
        magnitude = _knee(rng, x, y)
    else:
        magnitude = _liver(rng, x, y)

    magnitude = np.clip(magnitude, 0.0, None)
    magnitude = magnitude / magnitude.max()
    field = magnitude * np.exp(1j * _smooth_phase(rng, x, y))
    maps = _coil_maps(np.random.default_rng(coil_seed), spec.coils, x, y)
    return Phantom(ComplexImage.from_complex(field), CoilSensitivities(maps), roi)


def gen_phantom(spec):
    phantom = render_phantom(spec)
    return phantom.image, phantom.sens
