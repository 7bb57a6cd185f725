"""Envelope wire format and a content-keyed object store.

Wire layout (big-endian, 20-byte header):

    magic "IFSC" | version u8 = 1 | mode u8 | n u8 | symbol_width u8 |
    block_bytes u32 | plaintext_len u64 | payload

decode is strict: bad magic, bad version, out-of-range fields, trailing
bytes, or a short payload are all rejected, so encode/decode is a
bijection on valid envelopes.

The store maps hex(fnv1a64(file_id || ":" || version)) to blobs under
<root>/objects/; writes go to a temp file and then os.replace, so a
reader never observes a half-written object.  With root=None the store
is memory-only (tests, dry runs).
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, Optional

from .cipher import BadHeader, CipherEnvelope, Mode
from .errors import Error
from .hashing import fnv1a64

_HEADER = struct.Struct(">4sBBBBIQ")
HEADER_BYTES = _HEADER.size  # 20
MAGIC = b"IFSC"
VERSION = 1

POLICY_FILENAME = "policy.json"
ACL_BACKUP_FILENAME = "acl-backup.json"


class IoFailure(Error):
    """Underlying filesystem operation failed."""


class NotFound(Error):
    """No object stored under that key."""


class Truncated(BadHeader):
    """Envelope bytes end before the header or payload does."""


def encode_envelope(envelope: CipherEnvelope) -> bytes:
    """Serialize an envelope to the wire format."""
    header = _HEADER.pack(MAGIC, VERSION, int(envelope.mode), envelope.n,
                          envelope.symbol_width, envelope.block_bytes,
                          envelope.plaintext_len)
    return header + envelope.payload


def decode_envelope(data: bytes) -> CipherEnvelope:
    """Parse wire bytes back into an envelope; strict about every field."""
    if len(data) < HEADER_BYTES:
        raise Truncated(f"{len(data)} bytes is shorter than the {HEADER_BYTES}-byte header")
    magic, version, mode, n, width, block_bytes, plaintext_len = \
        _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadHeader(f"bad magic {magic!r}")
    if version != VERSION:
        raise BadHeader(f"unsupported version {version}")
    try:
        mode = Mode(mode)
    except ValueError:
        raise BadHeader(f"unknown mode byte {mode}") from None
    payload = data[HEADER_BYTES:]
    expected = plaintext_len * (width if mode == Mode.POWER else 1)
    if len(payload) < expected:
        raise Truncated(f"payload is {len(payload)} bytes, header implies {expected}")
    if len(payload) > expected:
        raise BadHeader(f"{len(payload) - expected} trailing bytes after payload")
    return CipherEnvelope(mode=mode, n=n, symbol_width=width,
                          block_bytes=block_bytes, plaintext_len=plaintext_len,
                          payload=payload)


def object_key(file_id: str, version: int = 0) -> str:
    """Content key: hex of fnv1a64(file_id || ":" || version)."""
    return format(fnv1a64(f"{file_id}:{version}".encode("utf-8")), "016x")


@dataclass(frozen=True)
class Receipt:
    """Acknowledgement of a durable write."""

    key: str
    length: int


class ObjectStore:
    """Blob store keyed by object_key strings.

    Disk-backed when constructed with a root directory; an in-memory
    map mirrors the objects either way.
    """

    def __init__(self, root: "str | Path | None" = None):
        self.root: Optional[Path] = Path(root) if root is not None else None
        self.objects: Dict[str, bytes] = {}
        if self.root is not None:
            try:
                (self.root / "objects").mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                raise IoFailure(f"cannot create store at {self.root}: {exc}") from exc
            for entry in (self.root / "objects").iterdir():
                if entry.is_file() and not entry.name.endswith(".tmp"):
                    self.objects[entry.name] = entry.read_bytes()

    def _object_path(self, key: str) -> Path:
        assert self.root is not None
        return self.root / "objects" / key

    def put_object(self, key: str, data: bytes) -> Receipt:
        """Store a blob durably; atomic replace if the key exists."""
        if self.root is not None:
            path = self._object_path(key)
            try:
                _atomic_write(path, data)
            except OSError as exc:
                raise IoFailure(f"write failed for {path}: {exc}") from exc
        self.objects[key] = data
        return Receipt(key=key, length=len(data))

    def get_object(self, key: str) -> bytes:
        """Fetch a blob; NotFound if it was never stored."""
        if key in self.objects:
            return self.objects[key]
        if self.root is not None:
            path = self._object_path(key)
            if path.exists():
                try:
                    data = path.read_bytes()
                except OSError as exc:
                    raise IoFailure(f"read failed for {path}: {exc}") from exc
                self.objects[key] = data
                return data
        raise NotFound(f"no object under key {key}")

    def keys(self) -> Iterator[str]:
        return iter(sorted(self.objects))

    def write_text(self, filename: str, text: str) -> None:
        """Atomically write a root-level text file (policy, ACL backup)."""
        if self.root is None:
            self.objects[f"::{filename}"] = text.encode("utf-8")
            return
        try:
            _atomic_write(self.root / filename, text.encode("utf-8"))
        except OSError as exc:
            raise IoFailure(f"write failed for {filename}: {exc}") from exc

    def read_text(self, filename: str) -> str:
        """Read a root-level text file; NotFound if absent."""
        if self.root is None:
            blob = self.objects.get(f"::{filename}")
            if blob is None:
                raise NotFound(f"no file {filename} in memory store")
            return blob.decode("utf-8")
        path = self.root / filename
        if not path.exists():
            raise NotFound(f"no file {path}")
        try:
            return path.read_text(encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"read failed for {path}: {exc}") from exc


def _atomic_write(path: Path, data: bytes) -> None:
    # Temp file in the same directory so os.replace stays on one filesystem.
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)
