"""Binary serialization of a TF-IDF index.

Layout (all integers little-endian):

    magic   4 bytes  b"LSIM"
    version u16
    vocab   u64 byte length, then UTF-8 newline-delimited terms
    indptr  u64 count, then u64[count]
    indices u64 count, then u32[count]
    data    u64 count, then f64[count]
    idf     u64 count, then f64[count]
    registry u64 byte length, then UTF-8 JSON {"docs": [...], "word_counts": [...]}
    crc32   u32 over every preceding byte

Matrix values and idf are stored as f64 so a load reproduces the saved index
bit-exactly.  Structural damage surfaces as a distinct error per failure mode:
bad magic, unsupported version, file ending early, or checksum mismatch.
"""

from __future__ import annotations

import json
import struct
import zlib
from pathlib import Path

import numpy as np

from litsim.errors import (
    IndexChecksumError,
    IndexFormatError,
    IndexTruncatedError,
    IndexVersionError,
)
from litsim.ingest import PaperMeta
from litsim.vectorize import TfidfIndex, Vocabulary

MAGIC = b"LSIM"
VERSION = 1

_ARRAY_SPECS = (("indptr", "<u8"), ("indices", "<u4"), ("data", "<f8"), ("idf", "<f8"))


def save_index(index: TfidfIndex, path: str | Path) -> None:
    buf = bytearray()
    buf += MAGIC
    buf += struct.pack("<H", VERSION)
    vocab_block = "\n".join(index.vocab.terms).encode("utf-8")
    buf += struct.pack("<Q", len(vocab_block))
    buf += vocab_block
    for name, dtype in _ARRAY_SPECS:
        arr = np.ascontiguousarray(getattr(index, name), dtype=dtype)
        buf += struct.pack("<Q", arr.size)
        buf += arr.tobytes()
    registry = json.dumps(
        {
            "docs": [m.to_dict() for m in index.docs],
            "word_counts": index.word_counts.tolist(),
        },
        ensure_ascii=False,
    ).encode("utf-8")
    buf += struct.pack("<Q", len(registry))
    buf += registry
    buf += struct.pack("<I", zlib.crc32(bytes(buf)))
    Path(path).write_bytes(bytes(buf))


class _Reader:
    """Cursor over the payload region; running past the end means truncation."""

    def __init__(self, payload: bytes, pos: int):
        self.payload = payload
        self.pos = pos

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.payload):
            raise IndexTruncatedError(f"file ends inside {what}")
        chunk = self.payload[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u64(self, what: str) -> int:
        return struct.unpack("<Q", self.take(8, what))[0]

    def array(self, dtype: str, itemsize: int, what: str) -> np.ndarray:
        count = self.u64(f"{what} count")
        raw = self.take(count * itemsize, f"{what} array")
        return np.frombuffer(raw, dtype=dtype).copy()


def load_index(path: str | Path) -> TfidfIndex:
    blob = Path(path).read_bytes()
    if blob[: len(MAGIC)] != MAGIC:
        raise IndexFormatError(f"not an index file (bad magic): {path}")
    if len(blob) < len(MAGIC) + 2:
        raise IndexTruncatedError("file ends inside version field")
    (version,) = struct.unpack_from("<H", blob, len(MAGIC))
    if version != VERSION:
        raise IndexVersionError(f"unsupported index version {version} (want {VERSION})")
    if len(blob) < len(MAGIC) + 2 + 4:
        raise IndexTruncatedError("file too short to hold a checksum")
    payload, trailer = blob[:-4], blob[-4:]

    r = _Reader(payload, len(MAGIC) + 2)
    vocab_len = r.u64("vocabulary length")
    vocab_block = r.take(vocab_len, "vocabulary block")
    arrays = {
        name: r.array(dtype, np.dtype(dtype).itemsize, name)
        for name, dtype in _ARRAY_SPECS
    }
    registry_len = r.u64("registry length")
    registry_block = r.take(registry_len, "registry block")
    if r.pos != len(payload):
        raise IndexFormatError(f"{len(payload) - r.pos} unexpected trailing bytes")

    (stored_crc,) = struct.unpack("<I", trailer)
    actual_crc = zlib.crc32(payload)
    if stored_crc != actual_crc:
        raise IndexChecksumError(
            f"checksum mismatch: stored {stored_crc:#010x}, computed {actual_crc:#010x}"
        )

    try:
        terms = tuple(vocab_block.decode("utf-8").split("\n")) if vocab_block else ()
        vocab = Vocabulary(terms=terms, index={t: i for i, t in enumerate(terms)})
        registry = json.loads(registry_block.decode("utf-8"))
        docs = [PaperMeta.from_dict(d) for d in registry["docs"]]
        word_counts = np.asarray(registry["word_counts"], dtype=np.int64)
        return TfidfIndex(
            indptr=arrays["indptr"],
            indices=arrays["indices"],
            data=arrays["data"],
            idf=arrays["idf"],
            vocab=vocab,
            docs=docs,
            word_counts=word_counts,
        )
    except (ValueError, KeyError, TypeError, UnicodeDecodeError) as exc:
        raise IndexFormatError(f"malformed index contents: {exc}") from exc
