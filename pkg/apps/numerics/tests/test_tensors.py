import os
import tempfile

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_array_equal

from apps.corecode.exceptions import FormatError, ShapeError
from apps.numerics.tensors import (
    ComplexImage,
    load_tensor,
    save_tensor,
    tensor_from_bytes,
    tensor_to_bytes,
)


class TensorFileTest(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def test_layout(self):
        blob = tensor_to_bytes(np.arange(6.0).reshape(2, 3))
        self.assertEqual(blob[:4], b"TNS1")
        self.assertEqual(blob[4:8], (2).to_bytes(4, "little"))
        dims = (2).to_bytes(4, "little") + (3).to_bytes(4, "little")
        self.assertEqual(blob[8:16], dims)
        self.assertEqual(len(blob), 16 + 6 * 8)

    def test_save_and_load_are_exact(self):
        value = np.random.default_rng(0).standard_normal((2, 4, 4))
        path = os.path.join(self.tmp.name, "x.tns")
        save_tensor(path, value)
        assert_array_equal(load_tensor(path), value)

    def test_consecutive_blocks(self):
        blob = tensor_to_bytes(np.ones(3)) + tensor_to_bytes(np.zeros((2, 2)))
        first, offset = tensor_from_bytes(blob)
        second, end = tensor_from_bytes(blob, offset)
        assert_array_equal(first, np.ones(3))
        assert_array_equal(second, np.zeros((2, 2)))
        self.assertEqual(end, len(blob))

    def test_bad_magic(self):
        with self.assertRaises(FormatError):
            tensor_from_bytes(b"TNS2" + bytes(12))

    def test_truncated(self):
        blob = tensor_to_bytes(np.ones((4, 4)))
        with self.assertRaises(FormatError):
            tensor_from_bytes(blob[:-8])

    def test_trailing_bytes(self):
        path = os.path.join(self.tmp.name, "x.tns")
        with open(path, "wb") as fh:
            fh.write(tensor_to_bytes(np.ones(2)) + b"\0")
        with self.assertRaises(FormatError):
            load_tensor(path)

    def test_zero_extent_rejected(self):
        with self.assertRaises(ShapeError):
            tensor_to_bytes(np.zeros((0, 3)))


class ComplexImageTest(SimpleTestCase):
    def test_planes(self):
        image = ComplexImage.from_complex(np.array([[1 + 2j, 3 - 4j]]))
        assert_array_equal(image.to_planes(), [[[1, 3]], [[2, -4]]])
        assert_array_equal(image.magnitude(), [[np.sqrt(5), 5]])
        self.assertEqual(image.shape, (1, 2))

    def test_mismatched_planes(self):
        with self.assertRaises(ShapeError):
            ComplexImage(np.zeros((2, 2)), np.zeros((2, 3)))
