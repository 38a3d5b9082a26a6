"""Binary network checkpoints.

Layout (all little-endian):

    7s   magic "DQNSOC1"
    H    format version (currently 1)
    H    number of layer dims
    I*n  layer dims
    Q    training step (gradient updates performed)
    d    exploration epsilon at save time
    Q    parameter count
    f*m  flat parameters, float32, layer order W1 b1 W2 b2 ...
    I    CRC32 of every preceding byte

Round trips are bit-exact; loading validates magic, checksum, and version
with distinct error types.
"""
from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from dqnsoccer.nn import Mlp, init_network, params_flat, set_params_flat

MAGIC = b"DQNSOC1"
VERSION = 1


class CheckpointError(Exception):
    """Base class for checkpoint format problems."""


class BadMagicError(CheckpointError):
    pass


class VersionMismatchError(CheckpointError):
    pass


class ChecksumError(CheckpointError):
    pass


@dataclass(frozen=True)
class Checkpoint:
    dims: tuple[int, ...]
    step: int
    epsilon: float
    params: np.ndarray  # float32, flat layer order

    def to_network(self) -> Mlp:
        net = init_network(self.dims, np.random.default_rng(0))
        set_params_flat(net, self.params)
        return net


def serialize(ckpt: Checkpoint) -> bytes:
    head = MAGIC + struct.pack("<HH", VERSION, len(ckpt.dims))
    head += struct.pack(f"<{len(ckpt.dims)}I", *ckpt.dims)
    head += struct.pack("<Qd", ckpt.step, ckpt.epsilon)
    params = np.ascontiguousarray(ckpt.params, dtype="<f4")
    head += struct.pack("<Q", params.size)
    body = head + params.tobytes()
    return body + struct.pack("<I", zlib.crc32(body))


def deserialize(blob: bytes) -> Checkpoint:
    if len(blob) < len(MAGIC) + 4 or blob[: len(MAGIC)] != MAGIC:
        raise BadMagicError("not a checkpoint file")
    stored_crc = struct.unpack("<I", blob[-4:])[0]
    if zlib.crc32(blob[:-4]) != stored_crc:
        raise ChecksumError("checkpoint checksum mismatch")
    off = len(MAGIC)
    version, n_dims = struct.unpack_from("<HH", blob, off)
    if version != VERSION:
        raise VersionMismatchError(f"checkpoint version {version}, reader supports {VERSION}")
    off += 4
    dims = struct.unpack_from(f"<{n_dims}I", blob, off)
    off += 4 * n_dims
    step, epsilon = struct.unpack_from("<Qd", blob, off)
    off += 16
    (n_params,) = struct.unpack_from("<Q", blob, off)
    off += 8
    expected = sum(a * b + b for a, b in zip(dims[:-1], dims[1:]))
    if n_params != expected or len(blob) != off + 4 * n_params + 4:
        raise ChecksumError("checkpoint parameter block has the wrong size")
    params = np.frombuffer(blob, dtype="<f4", count=n_params, offset=off).copy()
    return Checkpoint(tuple(int(d) for d in dims), int(step), float(epsilon), params)


def save_checkpoint(path: str | Path, net: Mlp, step: int, epsilon: float) -> Checkpoint:
    ckpt = Checkpoint(net.dims, step, epsilon, params_flat(net))
    tmp = Path(str(path) + ".tmp")
    tmp.write_bytes(serialize(ckpt))
    tmp.replace(path)
    return ckpt


def load_checkpoint(path: str | Path) -> Checkpoint:
    return deserialize(Path(path).read_bytes())
