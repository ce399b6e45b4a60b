import csv
import json
import math
import os
import zlib


def crc32_file(path):
    """CRC32 of a file's bytes, as an unsigned integer."""
    with open(path, "rb") as fh:
        return zlib.crc32(fh.read()) & 0xFFFFFFFF


def _json_safe(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "+INF" if value > 0 else "-INF"
        if math.isnan(value):
            return "NaN"
        return value
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if hasattr(value, "item"):
        return _json_safe(value.item())
    return value


def write_json(path, payload):
    """Write ``payload`` as sorted, indented JSON; infinities become sentinels."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf8") as fh:
        json.dump(_json_safe(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    with open(path, encoding="utf8") as fh:
        return json.load(fh)


def format_value(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "+INF" if value > 0 else "-INF"
        return repr(value)
    return str(value)


def write_csv(path, header, rows):
    """Write rows under a fixed column order; floats use ``repr`` for exactness."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="", encoding="utf8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(row[col]) for col in header])
