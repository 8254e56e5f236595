"""Single-file binary persistence for trained models.

Archive layout (all integers little-endian, documented byte-exactly in
docs/model-format.md):

    magic            8 bytes  b"CSUICIDE"
    format_version   u32
    config_len       u32, then config JSON (UTF-8)
    vocab_len        u32, then vocabulary text (word<TAB>index lines, UTF-8)
    tensor_count     u32
    per tensor:      name_len u32, name UTF-8, ndim u32, dims u32 each,
                     raw float32 data (C order)
    checksum         u32 CRC32 over every preceding byte
"""

import json
import struct
import zlib
from pathlib import Path

import numpy as np

from .nn.gru import GruLayerParams, ShapeMismatchError
from .nn.model import GruStackModel, ModelConfig, TENSOR_ORDER, param_count
from .textproc import Vocabulary

__all__ = [
    "MAGIC", "FORMAT_VERSION", "ArchiveError", "ChecksumMismatchError",
    "VersionUnsupportedError", "save", "load", "read_checksum",
]

MAGIC = b"CSUICIDE"
FORMAT_VERSION = 1


class ArchiveError(ValueError):
    """The file is not a readable model archive."""


class ChecksumMismatchError(ArchiveError):
    """Stored checksum does not match the payload bytes."""


class VersionUnsupportedError(ArchiveError):
    """The archive declares an unknown format version."""


def _tensor_map(model: GruStackModel) -> dict:
    return model.all_tensors()


def save(model: GruStackModel, vocab: Vocabulary, path: str | Path) -> str:
    """Write the archive; returns the checksum as 8 hex digits."""
    meta = {
        "model": model.config.to_dict(),
        "vocab_max_words": vocab.max_words,
        "param_total": param_count(model.config).total,
    }
    config_blob = json.dumps(meta, sort_keys=True).encode("utf-8")
    vocab_blob = vocab.to_text().encode("utf-8")
    parts = [
        MAGIC,
        struct.pack("<I", FORMAT_VERSION),
        struct.pack("<I", len(config_blob)), config_blob,
        struct.pack("<I", len(vocab_blob)), vocab_blob,
        struct.pack("<I", len(TENSOR_ORDER)),
    ]
    tensors = _tensor_map(model)
    for name in TENSOR_ORDER:
        data = np.ascontiguousarray(tensors[name], dtype="<f4")
        encoded_name = name.encode("utf-8")
        parts.append(struct.pack("<I", len(encoded_name)))
        parts.append(encoded_name)
        parts.append(struct.pack("<I", data.ndim))
        parts.append(struct.pack(f"<{data.ndim}I", *data.shape))
        parts.append(data.tobytes(order="C"))
    payload = b"".join(parts)
    checksum = zlib.crc32(payload) & 0xFFFFFFFF
    with open(path, "wb") as fh:
        fh.write(payload)
        fh.write(struct.pack("<I", checksum))
    return f"{checksum:08x}"


class _Reader:
    def __init__(self, blob: bytes):
        self.blob = blob
        self.pos = 0

    def take(self, count: int) -> bytes:
        end = self.pos + count
        if end > len(self.blob):
            raise ArchiveError("archive truncated")
        out = self.blob[self.pos:end]
        self.pos = end
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]


def load(path: str | Path) -> tuple[GruStackModel, Vocabulary]:
    """Read an archive back into (model, vocabulary).

    Raises ChecksumMismatchError, VersionUnsupportedError or ArchiveError
    without ever returning a partial model.
    """
    blob = Path(path).read_bytes()
    if len(blob) < len(MAGIC) + 8:
        raise ArchiveError("archive truncated")
    payload, stored = blob[:-4], struct.unpack("<I", blob[-4:])[0]
    if zlib.crc32(payload) & 0xFFFFFFFF != stored:
        raise ChecksumMismatchError(f"{path}: checksum mismatch")
    reader = _Reader(payload)
    if reader.take(len(MAGIC)) != MAGIC:
        raise ArchiveError(f"{path}: bad magic")
    version = reader.u32()
    if version != FORMAT_VERSION:
        raise VersionUnsupportedError(f"format_version {version} unsupported")
    meta = json.loads(reader.take(reader.u32()).decode("utf-8"))
    config = ModelConfig.from_dict(meta["model"])
    vocab = Vocabulary.from_text(
        reader.take(reader.u32()).decode("utf-8"),
        max_words=meta.get("vocab_max_words"),
    )
    count = reader.u32()
    if count != len(TENSOR_ORDER):
        raise ArchiveError(f"expected {len(TENSOR_ORDER)} tensors, found {count}")
    tensors = {}
    for _ in range(count):
        name = reader.take(reader.u32()).decode("utf-8")
        ndim = reader.u32()
        shape = tuple(reader.u32() for _ in range(ndim))
        size = int(np.prod(shape, dtype=np.int64)) if shape else 1
        data = np.frombuffer(reader.take(size * 4), dtype="<f4").reshape(shape)
        tensors[name] = np.ascontiguousarray(data, dtype=np.float32)
    if reader.pos != len(payload):
        raise ArchiveError("trailing bytes after tensor data")
    missing = [n for n in TENSOR_ORDER if n not in tensors]
    if missing:
        raise ArchiveError(f"missing tensors: {missing}")

    expected = _expected_shapes(config)
    for name, shape in expected.items():
        if tensors[name].shape != shape:
            raise ShapeMismatchError(
                f"{name}: archived {tensors[name].shape}, config implies {shape}")
    if meta.get("param_total") is not None:
        actual = sum(t.size for t in tensors.values())
        if actual != meta["param_total"]:
            raise ShapeMismatchError(
                f"archived {actual} parameters, metadata declares {meta['param_total']}")

    def layer(prefix):
        return GruLayerParams(
            W_in=tensors[f"{prefix}.W_in"],
            W_rec=tensors[f"{prefix}.W_rec"],
            b_in=tensors[f"{prefix}.b_in"],
            b_rec=tensors[f"{prefix}.b_rec"],
        )

    model = GruStackModel(
        config=config,
        embedding=tensors["embedding"],
        gru1=layer("gru1"),
        gru2=layer("gru2"),
        gru3=layer("gru3"),
        dense_W=tensors["dense_W"],
        dense_b=tensors["dense_b"],
    )
    return model, vocab


def _expected_shapes(config: ModelConfig) -> dict:
    u = config.gru_units
    shapes = {
        "embedding": (config.vocab_size, config.embed_dim),
        "dense_W": (u, config.num_classes),
        "dense_b": (config.num_classes,),
    }
    for i, input_dim in ((1, config.embed_dim), (2, u), (3, u)):
        shapes[f"gru{i}.W_in"] = (input_dim, 3 * u)
        shapes[f"gru{i}.W_rec"] = (u, 3 * u)
        shapes[f"gru{i}.b_in"] = (3 * u,)
        shapes[f"gru{i}.b_rec"] = (3 * u,)
    return shapes


def read_checksum(path: str | Path) -> str:
    """The archive's stored checksum as 8 hex digits (verifies nothing)."""
    with open(path, "rb") as fh:
        fh.seek(-4, 2)
        return f"{struct.unpack('<I', fh.read(4))[0]:08x}"
