"""PGN1 checkpoints: magic, u32 header length, JSON header, TNS1 blocks.

The header carries the generator config, the architecture fingerprint (ordered
name + shape list) and a training-state summary; tensors follow in
fingerprint order.
"""
import json
import logging
import os
import struct
from collections import OrderedDict

from apps.corecode.exceptions import FormatError, IncompatibleCheckpointError
from apps.numerics.tensors import tensor_from_bytes, tensor_to_bytes

from .params import (
    GeneratorConfig,
    ModelParams,
    check_fingerprint,
    expected_fingerprint,
)

logger = logging.getLogger(__name__)

PGN_MAGIC = b"PGN1"

# Recorded in every header: the per-block feature-map counts follow a constant
# channel width, which may differ from drawings of the original architecture.
ARCHITECTURE_NOTES = {
    "channel_width": "constant across U-Net scales",
    "upsampling": "nearest x2 + 3x3 conv",
    "data_consistency": "loss terms only, no hard projection layer",
}


def checkpoint_header(params, training=None):
    config = params.config.to_dict() if params.config is not None else None
    return {
        "format_version": ModelParams.FORMAT_VERSION,
        "config": config,
        "fingerprint": params.fingerprint(),
        "training": training or {},
        "architecture": ARCHITECTURE_NOTES,
    }


def save_params(path, params, training=None):
    """Write ``params`` as PGN1; ``training`` is a JSON-able state summary."""
    header = json.dumps(checkpoint_header(params, training), sort_keys=True)
    header = header.encode("utf8")
    blocks = b"".join(tensor_to_bytes(value) for value in params.tensors.values())
    directory = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(directory, exist_ok=True)
        with open(path, "wb") as fh:
            fh.write(PGN_MAGIC + struct.pack("<I", len(header)) + header + blocks)
    except OSError as exc:
        raise OSError(f"cannot write checkpoint {path}: {exc}") from exc
    logger.info("saved checkpoint %s (%d tensors)", path, len(params))


def read_checkpoint(path):
    """Return (header dict, ModelParams) without any compatibility check."""
    try:
        with open(path, "rb") as fh:
            buffer = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read checkpoint {path}: {exc}") from exc
    if buffer[:4] != PGN_MAGIC:
        raise FormatError(f"{path} is not a PGN1 checkpoint")
    (length,) = struct.unpack_from("<I", buffer, 4)
    try:
        header = json.loads(buffer[8 : 8 + length].decode("utf8"))
    except ValueError as exc:
        raise FormatError(f"{path}: corrupt checkpoint header") from exc
    offset = 8 + length
    tensors = OrderedDict()
    for name, shape in header["fingerprint"]:
        value, offset = tensor_from_bytes(buffer, offset)
        if list(value.shape) != list(shape):
            raise FormatError(
                f"{path}: tensor {name} has shape {value.shape}, header says {shape}"
            )
        tensors[name] = value
    if offset != len(buffer):
        raise FormatError(f"{path}: trailing bytes after the last tensor")
    config = header.get("config")
    config = GeneratorConfig.from_dict(config) if config else None
    return header, ModelParams(tensors, config)


def load_params(path, config=None):
    """Load a checkpoint, verifying its fingerprint against ``config`` if given."""
    header, params = read_checkpoint(path)
    if config is not None:
        try:
            check_fingerprint(params.fingerprint(), expected_fingerprint(config))
        except IncompatibleCheckpointError as exc:
            raise IncompatibleCheckpointError(f"{path}: {exc}", name=exc.name) from exc
        params.config = config
    return params


def load_header(path):
    return read_checkpoint(path)[0]
