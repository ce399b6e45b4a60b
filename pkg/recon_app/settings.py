"""
Django settings for recon_app project.

The project is a command-line pipeline: every workflow step is a management
command (``python manage.py <command>``). There are no views, templates or
middleware; the database only keeps a registry of datasets, runs and
checkpoints.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

import os

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get("RECON_SECRET_KEY", "recon-app-local-only-key")

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "apps.corecode",
    "apps.numerics",
    "apps.encoding",
    "apps.phantoms",
    "apps.network",
    "apps.training",
    "apps.metrics",
    "apps.experiments",
]


# Database
# https://docs.djangoproject.com/en/4.2/ref/settings/#databases

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": os.path.join(BASE_DIR, "db.sqlite3"),
    }
}


# Internationalization

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True


LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {message}",
            "style": "{",
        },
        "simple": {
            "format": "{levelname} {name} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "file": {
            "level": "INFO",
            "class": "logging.handlers.TimedRotatingFileHandler",
            "when": "W6",
            "interval": 4,
            "backupCount": 3,
            "encoding": "utf8",
            "filename": os.path.join(BASE_DIR, "debug.log"),
            "formatter": "verbose",
        },
        "console": {
            "level": "INFO",
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "loggers": {
        "django": {
            "handlers": ["file"],
            "level": "INFO",
            "propagate": True,
        },
        "apps": {
            "handlers": ["file", "console"],
            "level": os.environ.get("RECON_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
    },
}

DEFAULT_AUTO_FIELD = "django.db.models.AutoField"

# Site Default values

# Desk-scale defaults: small enough that the acceptance runs finish on one CPU
# core in minutes.
RECON_DEFAULTS = {
    "size": 64,
    "coils": 4,
    "af": 4.0,
    "acs": 8,
    "noise_sigma": 0.0,
    "base_width": 32,
    "bottleneck_width": 16,
    "batch_size": 4,
    "learning_rate": 1e-4,
    "pretrain_epochs": 60,
    "finetune_epochs": 30,
    "validate_every": 1,
    "alpha": 1.0,
    "beta": 10.0,
    "gamma": 10.0,
    "adam_beta1": 0.9,
    "adam_beta2": 0.999,
    "adam_eps": 1e-8,
    "cg_lambda": 1e-3,
    "cg_max_iters": 50,
    "cg_tol": 1e-6,
    "split": {"train": 200, "val": 20, "test": 40},
}

# Full-scale protocol values, layered over the desk-scale ones for full runs.
RECON_FULL_DEFAULTS = {
    "size": 256,
    "acs": 24,
    "base_width": 64,
    "bottleneck_width": 32,
    "batch_size": 8,
    "learning_rate": 1e-4,
    "pretrain_epochs": 1000,
    "finetune_epochs": 1000,
}
