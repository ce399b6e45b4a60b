import os
import tempfile

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_array_equal

from apps.corecode.exceptions import ConfigurationError, DatasetError
from apps.corecode.utils import crc32_file
from apps.phantoms.datasets import (
    build_dataset,
    load_dataset,
    read_manifest,
    regenerate_mismatches,
    sample_seed,
    verify_checksums,
)
from apps.phantoms.generators import PhantomSpec, render_phantom


class DatasetTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = os.path.join(self.tmp.name, "brain")
        self.manifest = build_dataset("brainlike", 3, 2, 2, 16, 2, 7, self.dir)

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def test_manifest(self):
        m = read_manifest(self.dir)
        self.assertEqual(m, self.manifest)
        self.assertEqual(m["counts"], {"train": 3, "val": 2, "test": 2})
        self.assertEqual(
            (m["domain"], m["H"], m["W"], m["C"]), ("brainlike", 16, 16, 2)
        )
        self.assertEqual(len(m["files"]), 14)
        for name, checksum in m["files"].items():
            self.assertEqual(crc32_file(os.path.join(self.dir, name)), checksum)

    def test_splits_are_disjoint(self):
        splits = self.manifest["splits"]
        everything = splits["train"] + splits["val"] + splits["test"]
        self.assertEqual(len(set(everything)), len(everything))

    def test_round_trip_is_bit_exact(self):
        test = load_dataset(self.dir, "test")
        self.assertEqual(len(test), 2)
        for sample in test.samples:
            spec = PhantomSpec("brainlike", 16, 2, sample_seed(7, sample.index))
            fresh = render_phantom(spec)
            assert_array_equal(sample.image.to_planes(), fresh.image.to_planes())
            assert_array_equal(sample.sens.maps, fresh.sens.maps)
        self.assertEqual(test.size, 16)
        self.assertEqual(test.coils, 2)

    def test_rebuild_is_identical(self):
        again = build_dataset("brainlike", 3, 2, 2, 16, 2, 7, self.path("again"))
        self.assertEqual(again["files"], self.manifest["files"])
        self.assertEqual(regenerate_mismatches(self.dir), [])

    def test_domains_differ(self):
        knee = build_dataset("kneelike", 3, 2, 2, 16, 2, 7, self.path("knee"))
        name = "train_0_x.tns"
        self.assertNotEqual(knee["files"][name], self.manifest["files"][name])

    def test_empty_train_split(self):
        manifest = build_dataset("liverlike", 0, 1, 1, 16, 2, 1, self.path("e"))
        self.assertEqual(manifest["splits"]["train"], [])
        self.assertEqual(len(load_dataset(self.path("e"), "train")), 0)

    def test_negative_count(self):
        with self.assertRaises(ConfigurationError):
            build_dataset("brainlike", -1, 0, 0, 16, 2, 0, self.path("bad"))

    def test_checksum_mismatch(self):
        path = os.path.join(self.dir, "val_3_x.tns")
        with open(path, "r+b") as fh:
            fh.seek(-1, os.SEEK_END)
            last = fh.read(1)
            fh.seek(-1, os.SEEK_END)
            fh.write(bytes([last[0] ^ 0xFF]))
        self.assertEqual(verify_checksums(self.dir), ["val_3_x.tns"])
        with self.assertRaises(DatasetError):
            load_dataset(self.dir, "val")

    def test_missing_samples_are_listed(self):
        os.remove(os.path.join(self.dir, "test_6_s.tns"))
        with self.assertRaisesMessage(DatasetError, "[6]"):
            load_dataset(self.dir, "test")

    def test_tumor_rois(self):
        directory = os.path.join(self.tmp.name, "tumor")
        manifest = build_dataset("tumorlike", 1, 0, 1, 32, 2, 3, directory)
        self.assertIn("test_1_roi.tns", manifest["files"])
        sample = load_dataset(directory, "test").samples[0]
        self.assertEqual(sample.roi.dtype, np.bool_)
        self.assertTrue(sample.roi.any())

    def test_unknown_split(self):
        with self.assertRaises(ConfigurationError):
            load_dataset(self.dir, "holdout")
