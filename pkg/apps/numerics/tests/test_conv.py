import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from apps.corecode.exceptions import ShapeError
from apps.numerics import ops
from apps.numerics.autodiff import Tape

from .test_autodiff import GradientCheckMixin


def loop_conv(x, w, b, stride):
    """Direct nested-loop cross-correlation with (k-1)//2 / k//2 zero padding."""
    n, cin, height, width = x.shape
    cout, _, k, _ = w.shape
    before, after = (k - 1) // 2, k // 2
    padded = np.pad(x, ((0, 0), (0, 0), (before, after), (before, after)))
    out_h = -(-height // stride)
    out_w = -(-width // stride)
    out = np.zeros((n, cout, out_h, out_w))
    for s in range(n):
        for o in range(cout):
            for i in range(out_h):
                for j in range(out_w):
                    rows = slice(i * stride, i * stride + k)
                    cols = slice(j * stride, j * stride + k)
                    patch = padded[s, :, rows, cols]
                    out[s, o, i, j] = np.sum(patch * w[o]) + b[o]
    return out


class ConvolutionTest(GradientCheckMixin, SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(5)

    def check_against_loops(self, kernel, stride, size=8):
        x = self.rng.standard_normal((2, 3, size, size))
        w = self.rng.standard_normal((4, 3, kernel, kernel))
        b = self.rng.standard_normal(4)
        out, _ = ops.conv2d_forward(x, w, b, stride)
        assert_allclose(out, loop_conv(x, w, b, stride), rtol=0, atol=1e-12)

    def test_matches_loop_oracle(self):
        for kernel in (1, 3, 4):
            for stride in (1, 2):
                with self.subTest(kernel=kernel, stride=stride):
                    self.check_against_loops(kernel, stride)

    def test_odd_extent_stride_two(self):
        self.check_against_loops(3, 2, size=7)

    def test_output_extent(self):
        self.assertEqual(ops.conv_output_extent(64, 3, 2), 32)
        self.assertEqual(ops.conv_output_extent(64, 4, 2), 32)
        self.assertEqual(ops.conv_output_extent(7, 3, 2), 4)
        self.assertEqual(ops.conv_output_extent(16, 3, 1), 16)

    def test_gradients(self):
        for kernel, stride in ((3, 1), (3, 2), (4, 2)):
            with self.subTest(kernel=kernel, stride=stride):
                x = self.rng.standard_normal((2, 2, 6, 6))
                w = self.rng.standard_normal((3, 2, kernel, kernel))
                b = self.rng.standard_normal(3)
                self.assertGradientsMatch(
                    lambda xn, wn, bn: ops.conv2d(xn, wn, bn, stride=stride), x, w, b
                )

    def test_channel_mismatch(self):
        with self.assertRaises(ShapeError):
            ops.conv2d_forward(np.zeros((1, 2, 4, 4)), np.zeros((1, 3, 3, 3)))

    def test_bad_stride(self):
        with self.assertRaises(ShapeError):
            ops.conv2d_forward(np.zeros((1, 1, 4, 4)), np.zeros((1, 1, 3, 3)), stride=3)

    def test_constant_input_gets_no_gradient_work(self):
        tape = Tape()
        x = tape.constant(np.ones((1, 1, 4, 4)))
        w = tape.leaf(np.ones((1, 1, 3, 3)))
        out = ops.conv2d(x, w)
        self.assertTrue(out.requires_grad)
        self.assertEqual(out.shape, (1, 1, 4, 4))
