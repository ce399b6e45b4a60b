import os
import tempfile
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from apps.encoding.masks import load_mask, make_mask


class MakeMaskCommandTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.out = os.path.join(self.tmp.name, "mask.tns")

    def test_writes_seeded_mask(self):
        call_command(
            "make_mask", "--size", "64", "--af", "4", "--acs", "8", "--seed", "3",
            "--out", self.out, stdout=StringIO(),
        )
        mask = load_mask(self.out)
        self.assertEqual(mask.count, 16)
        self.assertEqual(mask.af, 4.0)
        self.assertEqual(mask.rows.tolist(), make_mask(64, 64, 4.0, 8, 3).rows.tolist())

    def test_invalid_acs(self):
        with self.assertRaises(CommandError) as ctx:
            args = ["--size", "32", "--af", "8", "--acs", "16", "--out", self.out]
            call_command("make_mask", *args, stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)
