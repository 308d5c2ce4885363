"""Tensor checkpoint format: a JSON manifest plus one binary blob.

The manifest lists tensor names, shapes, dtype, and byte offsets; the
blob concatenates the tensors as little-endian 32-bit floats in manifest
order. Tensors are serialized in sorted-name order so identical contents
always produce identical bytes. Model checkpoints and semantic-basis
caches both use this format.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

FORMAT_TAG = "tensor-manifest-v1"
_DTYPE = "<f4"


def _blob_and_entries(tensors: dict[str, np.ndarray]) -> tuple[bytes, list[dict]]:
    entries = []
    parts = []
    offset = 0
    for name in sorted(tensors):
        arr = np.ascontiguousarray(tensors[name], dtype=_DTYPE)
        raw = arr.tobytes()
        entries.append(
            {
                "name": name,
                "shape": list(arr.shape),
                "dtype": "float32",
                "offset": offset,
                "nbytes": len(raw),
            }
        )
        parts.append(raw)
        offset += len(raw)
    return b"".join(parts), entries


def blob_checksum(tensors: dict[str, np.ndarray]) -> str:
    """sha256 of the serialized blob; the canonical content hash of a tensor set."""
    blob, _ = _blob_and_entries(tensors)
    return hashlib.sha256(blob).hexdigest()


def save(path_prefix: str | Path, tensors: dict[str, np.ndarray], metadata: dict | None = None) -> tuple[Path, Path]:
    """Write ``<prefix>.json`` and ``<prefix>.bin``; returns both paths."""
    prefix = Path(path_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    blob, entries = _blob_and_entries(tensors)
    manifest = {
        "format": FORMAT_TAG,
        "blob": prefix.name + ".bin",
        "blob_sha256": hashlib.sha256(blob).hexdigest(),
        "metadata": metadata or {},
        "tensors": entries,
    }
    manifest_path = prefix.with_suffix(prefix.suffix + ".json")
    blob_path = prefix.with_suffix(prefix.suffix + ".bin")
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    blob_path.write_bytes(blob)
    return manifest_path, blob_path


def load(path_prefix: str | Path) -> tuple[dict[str, np.ndarray], dict]:
    """Read a checkpoint back as float64 tensors plus its metadata."""
    prefix = Path(path_prefix)
    manifest_path = prefix.with_suffix(prefix.suffix + ".json")
    manifest = json.loads(manifest_path.read_text())
    if manifest.get("format") != FORMAT_TAG:
        raise ValueError(f"{manifest_path} is not a {FORMAT_TAG} manifest")
    blob = (manifest_path.parent / manifest["blob"]).read_bytes()
    tensors: dict[str, np.ndarray] = {}
    for entry in manifest["tensors"]:
        raw = blob[entry["offset"] : entry["offset"] + entry["nbytes"]]
        arr = np.frombuffer(raw, dtype=_DTYPE).reshape(entry["shape"])
        tensors[entry["name"]] = arr.astype(np.float64)
    return tensors, manifest["metadata"]


def file_checksum(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
