import math
import os
import tempfile
import zlib

import numpy as np
from django.test import SimpleTestCase

from apps.corecode.utils import crc32_file, read_json, write_csv, write_json


class UtilsTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def test_crc32(self):
        path = os.path.join(self.tmp.name, "blob")
        with open(path, "wb") as fh:
            fh.write(b"TNS1")
        self.assertEqual(crc32_file(path), zlib.crc32(b"TNS1") & 0xFFFFFFFF)

    def test_json_sentinels(self):
        path = os.path.join(self.tmp.name, "nested", "out.json")
        write_json(path, {"psnr": math.inf, "low": -math.inf, "n": np.int64(3)})
        self.assertEqual(read_json(path), {"low": "-INF", "n": 3, "psnr": "+INF"})

    def test_csv_column_order(self):
        path = os.path.join(self.tmp.name, "rows.csv")
        write_csv(path, ["b", "a"], [{"a": 0.1, "b": math.inf}, {"a": 2, "b": "x"}])
        with open(path, encoding="utf8") as fh:
            self.assertEqual(fh.read(), "b,a\n+INF,0.1\nx,2\n")
