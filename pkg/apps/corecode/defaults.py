from django.conf import settings

from .exceptions import ConfigurationError


def site_defaults(scale="desk", **overrides):
    """Pipeline defaults from settings, with explicit values taking precedence.

    ``scale="full"`` layers the full-scale protocol values over the desk-scale
    ones. ``None`` overrides are ignored so unset command flags fall through.
    """
    values = dict(settings.RECON_DEFAULTS)
    if scale == "full":
        values.update(settings.RECON_FULL_DEFAULTS)
    elif scale != "desk":
        raise ConfigurationError(f"unknown scale {scale!r}")
    for key, val in overrides.items():
        if val is not None:
            values[key] = val
    return values
