"""Resumable checkpoints for the blocking search.

File layout::

    FOXPRIM-CKPT 1\n
    <header JSON>\n          rank, params, record count, sha256 of the body
    <body>                   records, each a 4-byte big-endian length + UTF-8 JSON

Records are the per-candidate verdict dicts; candidate words are stored in
their canonical compact text form so reloading is bit-stable. Writes go to a
temporary file and are moved into place, so a crash never leaves a
half-written checkpoint under the real name.
"""
from __future__ import annotations

import hashlib
import json
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path

MAGIC = b"FOXPRIM-CKPT 1\n"


class CheckpointError(ValueError):
    pass


def _encode_body(records: list[dict]) -> bytes:
    parts = []
    for r in records:
        b = json.dumps(r, sort_keys=True, separators=(",", ":")).encode()
        parts.append(struct.pack(">I", len(b)) + b)
    return b"".join(parts)


def _decode_body(body: bytes) -> list[dict]:
    out = []
    pos = 0
    while pos < len(body):
        if pos + 4 > len(body):
            raise CheckpointError("truncated record length")
        (k,) = struct.unpack_from(">I", body, pos)
        pos += 4
        if pos + k > len(body):
            raise CheckpointError("truncated record body")
        out.append(json.loads(body[pos : pos + k]))
        pos += k
    return out


@dataclass
class Checkpoint:
    rank: int
    params: dict
    records: list[dict] = field(default_factory=list)

    def to_bytes(self) -> bytes:
        body = _encode_body(self.records)
        header = {
            "rank": self.rank,
            "params": self.params,
            "count": len(self.records),
            "sha256": hashlib.sha256(body).hexdigest(),
        }
        return MAGIC + json.dumps(header, sort_keys=True).encode() + b"\n" + body

    @classmethod
    def from_bytes(cls, data: bytes) -> "Checkpoint":
        if not data.startswith(MAGIC):
            raise CheckpointError("not a foxprim checkpoint")
        rest = data[len(MAGIC):]
        nl = rest.find(b"\n")
        if nl < 0:
            raise CheckpointError("missing header")
        try:
            header = json.loads(rest[:nl])
        except json.JSONDecodeError as e:
            raise CheckpointError(f"bad header: {e}") from None
        body = rest[nl + 1 :]
        if hashlib.sha256(body).hexdigest() != header.get("sha256"):
            raise CheckpointError("content hash mismatch (corrupt or truncated body)")
        records = _decode_body(body)
        if len(records) != header.get("count"):
            raise CheckpointError(f"record count {len(records)} != header count {header.get('count')}")
        return cls(header["rank"], header["params"], records)

    def save(self, path) -> None:
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(self.to_bytes())
        os.replace(tmp, path)

    @classmethod
    def load(cls, path, rank: int | None = None, params: dict | None = None) -> "Checkpoint":
        ck = cls.from_bytes(Path(path).read_bytes())
        if rank is not None and ck.rank != rank:
            raise CheckpointError(f"checkpoint rank {ck.rank} does not match requested rank {rank}")
        if params is not None and ck.params != params:
            raise CheckpointError(f"checkpoint parameters {ck.params} do not match {params}")
        return ck

    def done(self) -> dict[str, dict]:
        return {r["candidate"]: r for r in self.records}


class CheckpointWriter:
    """Sink for blocking_search: appends a record and rewrites the file every
    ``every`` records (and on close)."""

    def __init__(self, path, checkpoint: Checkpoint, every: int = 1):
        self.path = path
        self.ck = checkpoint
        self.every = max(1, every)
        self._pending = 0

    def __call__(self, record: dict):
        self.ck.records.append(record)
        self._pending += 1
        if self._pending >= self.every:
            self.flush()

    def flush(self):
        self.ck.save(self.path)
        self._pending = 0
