import numpy as np

from apps.phantoms.datasets import Dataset, Sample, sample_seed
from apps.phantoms.generators import PhantomSpec, render_phantom


def tiny_dataset(split, indices, domain="brainlike", size=16, coils=2, base_seed=0):
    """In-memory dataset of rendered phantoms, no files involved."""
    samples = []
    for index in indices:
        spec = PhantomSpec(domain, size, coils, sample_seed(base_seed, index))
        phantom = render_phantom(spec)
        samples.append(Sample(index, phantom.image, phantom.sens, phantom.roi))
    metadata = {
        "domain": domain,
        "H": size,
        "W": size,
        "C": coils,
        "base_seed": base_seed,
    }
    return Dataset(split, samples, metadata)


def random_pairs(rng, n=1, size=16):
    return rng.standard_normal((n, 2, size, size))


def random_maps(rng, n=1, coils=2, size=16):
    shape = (n, coils, size, size)
    maps = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return maps / np.sqrt(np.sum(np.abs(maps) ** 2, axis=1, keepdims=True))
