"""
Versioned binary container shared by the model and language model files.

Layout (all integers little-endian):

    magic (4 bytes) | version (uint16) | header length (uint32) | header (UTF-8 JSON)
    | section count (uint32) | for each section: length (uint64) + raw bytes

The JSON header is written with sorted keys so identical inputs produce
byte-identical files.
"""

import json
import logging
import os
import struct
from collections.abc import Sequence
from pathlib import Path

from .errors import ModelFileError

logger = logging.getLogger(__name__)

_PREAMBLE = struct.Struct("<4sHI")
_COUNT = struct.Struct("<I")
_SECTION = struct.Struct("<Q")


def write_container(
    path: str | Path,
    magic: bytes,
    version: int,
    header: dict,
    sections: Sequence[bytes] = (),
) -> None:
    """Write a container atomically (temporary file then rename)."""
    if len(magic) != 4:
        raise ValueError(f"Magic must be 4 bytes, got {magic!r}")

    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode(
        "utf-8"
    )
    path = Path(path)
    tmp_path = path.with_name(path.name + ".tmp")
    with open(tmp_path, "wb") as f:
        f.write(_PREAMBLE.pack(magic, version, len(header_bytes)))
        f.write(header_bytes)
        f.write(_COUNT.pack(len(sections)))
        for section in sections:
            f.write(_SECTION.pack(len(section)))
            f.write(section)
    os.replace(tmp_path, path)
    logger.debug(f"Wrote {magic.decode()} container v{version} to {path}")


def read_container(
    path: str | Path, magic: bytes, supported_versions: Sequence[int]
) -> tuple[int, dict, list[bytes]]:
    """
    Read a container written by write_container.

    Returns:
        Tuple of (version, header, sections).

    Raises:
        ModelFileError: On a missing file, wrong magic, unsupported version or truncation.
    """
    try:
        data = Path(path).read_bytes()
    except OSError as err:
        raise ModelFileError(path, str(err)) from err

    if len(data) < _PREAMBLE.size:
        raise ModelFileError(path, "file is truncated")
    found_magic, version, header_len = _PREAMBLE.unpack_from(data, 0)
    if found_magic != magic:
        raise ModelFileError(path, f"expected magic {magic!r}, found {found_magic!r}")
    if version not in supported_versions:
        raise ModelFileError(path, f"unsupported version {version}")

    offset = _PREAMBLE.size
    try:
        header = json.loads(data[offset : offset + header_len].decode("utf-8"))
        offset += header_len
        (count,) = _COUNT.unpack_from(data, offset)
        offset += _COUNT.size
        sections = []
        for _ in range(count):
            (length,) = _SECTION.unpack_from(data, offset)
            offset += _SECTION.size
            if offset + length > len(data):
                raise ModelFileError(path, "section extends past end of file")
            sections.append(data[offset : offset + length])
            offset += length
    except (struct.error, UnicodeDecodeError, json.JSONDecodeError) as err:
        raise ModelFileError(path, f"corrupted container ({err})") from err

    return version, header, sections
