"""Exit-code contract shared by every management command."""
from contextlib import contextmanager

from django.core.management.base import CommandError

from .exceptions import (
    ConfigurationError,
    DivergenceError,
    IncompatibleCheckpointError,
    ReconError,
)

EXIT_USAGE = 2
EXIT_INCOMPATIBLE = 3
EXIT_DIVERGED = 4


@contextmanager
def pipeline_errors():
    """Re-raise pipeline failures as ``CommandError`` with their exit code."""
    try:
        yield
    except IncompatibleCheckpointError as exc:
        raise CommandError(
            f"incompatible checkpoint: {exc}", returncode=EXIT_INCOMPATIBLE
        ) from exc
    except DivergenceError as exc:
        raise CommandError(
            f"training diverged: {exc}", returncode=EXIT_DIVERGED
        ) from exc
    except ConfigurationError as exc:
        raise CommandError(str(exc), returncode=EXIT_USAGE) from exc
    except (ReconError, OSError) as exc:
        raise CommandError(str(exc)) from exc


def usage_error(message):
    return CommandError(message, returncode=EXIT_USAGE)
