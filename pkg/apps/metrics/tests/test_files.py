import os
import tempfile

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_array_equal
from PIL import Image

from apps.corecode.exceptions import FormatError
from apps.metrics.pgm import PGM_MAXVAL, dequantize, quantize, read_pgm, write_pgm
from apps.metrics.roi import load_roi
from apps.numerics.tensors import save_tensor


class PgmTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def test_quantization(self):
        levels = quantize([[-0.5, 0.0, 0.5, 1.0, 2.0]])
        assert_array_equal(levels, [[0, 0, 32768, PGM_MAXVAL, PGM_MAXVAL]])
        self.assertEqual(dequantize(PGM_MAXVAL), 1.0)

    def test_round_trip_within_half_level(self):
        image = np.random.default_rng(0).uniform(size=(12, 20))
        path = os.path.join(self.tmp.name, "recon_0.pgm")
        write_pgm(path, image)
        back = read_pgm(path)
        self.assertEqual(back.shape, (12, 20))
        self.assertLessEqual(np.abs(back - image).max(), 0.5 / PGM_MAXVAL + 1e-15)
        assert_array_equal(quantize(back), quantize(image))

    def test_binary_sixteen_bit_header(self):
        path = os.path.join(self.tmp.name, "gt_1.pgm")
        write_pgm(path, np.ones((4, 6)))
        with open(path, "rb") as fh:
            data = fh.read()
        self.assertTrue(data.startswith(b"P5"))
        self.assertIn(b"65535", data[:32])
        self.assertEqual(data[-2:], b"\xff\xff")

    def test_not_a_pgm(self):
        path = os.path.join(self.tmp.name, "junk.pgm")
        with open(path, "wb") as fh:
            fh.write(b"hello")
        with self.assertRaises(FormatError):
            read_pgm(path)


class RoiFileTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.mask = np.zeros((8, 8), dtype=bool)
        self.mask[2:5, 3:7] = True

    def test_tensor_roi(self):
        path = os.path.join(self.tmp.name, "roi.tns")
        save_tensor(path, self.mask.astype(np.float64))
        assert_array_equal(load_roi(path), self.mask)

    def test_pgm_roi(self):
        path = os.path.join(self.tmp.name, "roi.pgm")
        Image.fromarray(self.mask.astype(np.uint8) * 255).save(path, format="PPM")
        assert_array_equal(load_roi(path), self.mask)

    def test_unknown_format(self):
        path = os.path.join(self.tmp.name, "roi.png")
        Image.fromarray(self.mask.astype(np.uint8) * 255).save(path, format="PNG")
        with self.assertRaises(FormatError):
            load_roi(path)
