from django.core.management.base import CommandError
from django.test import SimpleTestCase

from apps.corecode.commands import pipeline_errors, usage_error
from apps.corecode.exceptions import (
    ConfigurationError,
    DatasetError,
    DivergenceError,
    IncompatibleCheckpointError,
    ShapeError,
)


class PipelineErrorsTest(SimpleTestCase):
    def returncode(self, exc):
        with self.assertRaises(CommandError) as ctx:
            with pipeline_errors():
                raise exc
        self.assertIs(ctx.exception.__cause__, exc)
        return ctx.exception.returncode

    def test_exit_codes(self):
        cases = [
            (ConfigurationError("bad af"), 2),
            (IncompatibleCheckpointError("width", name="gen.final.w"), 3),
            (DivergenceError("nan loss", epoch=3, step=1), 4),
            (ShapeError("mismatch"), 1),
            (DatasetError("missing"), 1),
            (FileNotFoundError("gone"), 1),
        ]
        for exc, code in cases:
            with self.subTest(exc=type(exc).__name__):
                self.assertEqual(self.returncode(exc), code)

    def test_other_errors_pass_through(self):
        with self.assertRaises(KeyError):
            with pipeline_errors():
                raise KeyError("x")

    def test_usage_error(self):
        error = usage_error("--ckpt is required")
        self.assertIsInstance(error, CommandError)
        self.assertEqual(error.returncode, 2)
