"""Dataset generation, persistence and verification.

A dataset directory holds TNS1 sample files ``<split>_<index>_x.tns`` ([2, H, W]),
``<split>_<index>_s.tns`` ([C, 2, H, W]), ``<split>_<index>_roi.tns`` for
tumorlike data, and ``manifest.json``. Sample indices are global across
splits, so the splits are disjoint by construction.
"""
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from apps.corecode.exceptions import ConfigurationError, DatasetError
from apps.corecode.utils import crc32_file, read_json, write_json
from apps.encoding.sensitivities import CoilSensitivities
from apps.numerics.tensors import ComplexImage, load_tensor, save_tensor

from .generators import PhantomSpec, render_phantom

logger = logging.getLogger(__name__)

SPLITS = ("train", "val", "test")
MANIFEST_NAME = "manifest.json"
MANIFEST_FORMAT = "recon-dataset/1"


def sample_seed(base_seed, index):
    """Per-sample seed derived from (base_seed, index), independent of order."""
    sequence = np.random.SeedSequence([int(base_seed), int(index)])
    return int(sequence.generate_state(1)[0])


def sample_files(split, index, with_roi=False):
    stem = f"{split}_{index}"
    names = {"x": f"{stem}_x.tns", "s": f"{stem}_s.tns"}
    if with_roi:
        names["roi"] = f"{stem}_roi.tns"
    return names


@dataclass
class Sample:
    index: int
    image: ComplexImage
    sens: CoilSensitivities
    roi: Optional[np.ndarray] = None


@dataclass
class Dataset:
    split: str
    samples: List[Sample]
    metadata: Dict = field(default_factory=dict)

    def __len__(self):
        return len(self.samples)

    @property
    def size(self):
        return self.metadata["H"]

    @property
    def coils(self):
        return self.metadata["C"]


def split_indices(n_train, n_val, n_test):
    counts = {"train": n_train, "val": n_val, "test": n_test}
    indices, start = {}, 0
    for split in SPLITS:
        indices[split] = list(range(start, start + counts[split]))
        start += counts[split]
    return indices


def build_dataset(domain, n_train, n_val, n_test, size, coils, base_seed, out_dir):
    """Generate and write a dataset; returns the manifest dict."""
    for name, count in (("n_train", n_train), ("n_val", n_val), ("n_test", n_test)):
        if count < 0:
            raise ConfigurationError(f"{name} must be >= 0, got {count}")
    with_roi = domain == "tumorlike"
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create dataset directory {out_dir}: {exc}") from exc

    indices = split_indices(n_train, n_val, n_test)
    seeds, files = {}, {}
    for split in SPLITS:
        for index in indices[split]:
            seed = sample_seed(base_seed, index)
            seeds[str(index)] = seed
            phantom = render_phantom(PhantomSpec(domain, size, coils, seed))
            names = sample_files(split, index, with_roi)
            save_tensor(os.path.join(out_dir, names["x"]), phantom.image.to_planes())
            save_tensor(os.path.join(out_dir, names["s"]), phantom.sens.to_planes())
            if with_roi:
                roi = phantom.roi.astype(np.float64)
                save_tensor(os.path.join(out_dir, names["roi"]), roi)
            for name in names.values():
                files[name] = crc32_file(os.path.join(out_dir, name))

    manifest = {
        "format": MANIFEST_FORMAT,
        "domain": domain,
        "H": size,
        "W": size,
        "C": coils,
        "base_seed": base_seed,
        "counts": {split: len(indices[split]) for split in SPLITS},
        "splits": indices,
        "seeds": seeds,
        "files": files,
    }
    write_json(os.path.join(out_dir, MANIFEST_NAME), manifest)
    logger.info(
        "built %s dataset in %s (%d/%d/%d, %dx%d, %d coils)",
        domain,
        out_dir,
        n_train,
        n_val,
        n_test,
        size,
        size,
        coils,
    )
    return manifest


def read_manifest(directory):
    path = os.path.join(directory, MANIFEST_NAME)
    try:
        manifest = read_json(path)
    except OSError as exc:
        raise DatasetError(f"cannot read manifest {path}: {exc}") from exc
    if manifest.get("format") != MANIFEST_FORMAT:
        raise DatasetError(f"{path} is not a dataset manifest")
    return manifest


def verify_checksums(directory, manifest=None):
    """Names of files whose CRC32 no longer matches the manifest."""
    manifest = manifest or read_manifest(directory)
    bad = []
    for name, checksum in sorted(manifest["files"].items()):
        path = os.path.join(directory, name)
        if not os.path.exists(path) or crc32_file(path) != checksum:
            bad.append(name)
    return bad


def load_dataset(directory, split):
    """Load one split, verifying the checksum of every file it touches."""
    if split not in SPLITS:
        raise ConfigurationError(f"unknown split {split!r}")
    manifest = read_manifest(directory)
    with_roi = manifest["domain"] == "tumorlike"
    samples, missing = [], []
    for index in manifest["splits"][split]:
        names = sample_files(split, index, with_roi)
        paths = {key: os.path.join(directory, name) for key, name in names.items()}
        if not all(os.path.exists(p) for p in paths.values()):
            missing.append(index)
            continue
        for key, name in names.items():
            if crc32_file(paths[key]) != manifest["files"].get(name):
                raise DatasetError(f"checksum mismatch for {paths[key]}")
        roi = load_tensor(paths["roi"]) != 0 if with_roi else None
        samples.append(
            Sample(
                index=index,
                image=ComplexImage.from_planes(load_tensor(paths["x"])),
                sens=CoilSensitivities.from_planes(load_tensor(paths["s"])),
                roi=roi,
            )
        )
    if missing:
        raise DatasetError(
            f"{directory}: {split} samples missing for indices {missing}"
        )
    metadata = {k: manifest[k] for k in ("domain", "H", "W", "C", "base_seed")}
    return Dataset(split=split, samples=samples, metadata=metadata)


def regenerate_mismatches(directory):
    """Indices whose stored tensors differ from a regeneration from manifest seeds."""
    manifest = read_manifest(directory)
    dataset_seed = manifest["base_seed"]
    mismatched = []
    for split in SPLITS:
        for sample in load_dataset(directory, split).samples:
            seed = sample_seed(dataset_seed, sample.index)
            if seed != manifest["seeds"][str(sample.index)]:
                mismatched.append(sample.index)
                continue
            fresh = render_phantom(
                PhantomSpec(manifest["domain"], manifest["H"], manifest["C"], seed)
            )
            same = np.array_equal(
                fresh.image.to_planes(), sample.image.to_planes()
            ) and np.array_equal(fresh.sens.to_planes(), sample.sens.to_planes())
            if not same:
                mismatched.append(sample.index)
    return mismatched
