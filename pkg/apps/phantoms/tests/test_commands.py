import os
import tempfile
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from apps.phantoms.datasets import read_manifest
from apps.phantoms.models import DatasetRecord


class SimulateCommandTest(TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.out = os.path.join(self.tmp.name, "tumor")

    def simulate(self, *args, domain="tumorlike"):
        args = ["--domain", domain, "--out", self.out, *args]
        call_command("simulate", *args, stdout=StringIO())

    def simulate_counts(self, train, val, test):
        counts = ["--n-train", str(train), "--n-val", str(val), "--n-test", str(test)]
        self.simulate(*counts, "--size", "16", "--coils", "2")

    def test_writes_and_registers(self):
        self.simulate_counts(2, 1, 1)
        manifest = read_manifest(self.out)
        self.assertEqual(manifest["counts"], {"train": 2, "val": 1, "test": 1})
        record = DatasetRecord.objects.get(path=os.path.abspath(self.out))
        self.assertEqual(
            (record.domain, record.size, record.coils), ("tumorlike", 16, 2)
        )
        self.assertEqual(record.total_samples(), 4)

    def test_rerun_updates_record(self):
        self.simulate_counts(1, 0, 0)
        self.simulate_counts(3, 0, 0)
        self.assertEqual(DatasetRecord.objects.get().n_train, 3)

    def test_verify(self):
        self.simulate_counts(1, 1, 0)
        self.simulate("--verify")
        with open(os.path.join(self.out, "val_1_s.tns"), "ab") as fh:
            fh.write(b"\0")
        with self.assertRaisesMessage(CommandError, "val_1_s.tns"):
            self.simulate("--verify")

    def test_invalid_domain(self):
        with self.assertRaises(CommandError):
            self.simulate(domain="heartlike")

    def test_invalid_size(self):
        with self.assertRaises(CommandError):
            self.simulate("--n-train", "1", "--size", "48", "--coils", "2")
