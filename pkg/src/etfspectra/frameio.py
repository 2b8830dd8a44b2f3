"""On-disk frame container.

Format "etfspectra-frame" version 1: a single JSON document with fields

    format   : "etfspectra-frame"
    version  : 1
    family   : construction name
    m, n     : shape (vectors are columns of an m-by-n matrix)
    field    : "real" | "complex"
    seed     : integer or null
    params   : construction parameters
    data_b64 : base64 of the row-major float64 little-endian entries;
               complex matrices store interleaved (re, im) pairs.

Writing the same frame twice produces byte-identical files.
"""

from __future__ import annotations

import base64
import json

import numpy as np

from .frames import FrameMatrix

__all__ = ["save_frame", "load_frame", "FORMAT_NAME", "FORMAT_VERSION"]

FORMAT_NAME = "etfspectra-frame"
FORMAT_VERSION = 1


def save_frame(frame: FrameMatrix, path: str) -> None:
    E = frame.entries
    if frame.is_complex:
        raw = np.ascontiguousarray(E.astype(np.complex128)).view(np.float64)
    else:
        raw = np.ascontiguousarray(E.astype(np.float64))
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "family": frame.family,
        "m": frame.m,
        "n": frame.n,
        "field": "complex" if frame.is_complex else "real",
        "seed": frame.seed,
        "params": frame.params,
        "data_b64": base64.b64encode(raw.astype("<f8").tobytes()).decode("ascii"),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True)
        fh.write("\n")


def load_frame(path: str) -> FrameMatrix:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != FORMAT_NAME or doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"not a {FORMAT_NAME} v{FORMAT_VERSION} file: {path}")
    m, n = int(doc["m"]), int(doc["n"])
    raw = np.frombuffer(base64.b64decode(doc["data_b64"]), dtype="<f8")
    if doc["field"] == "complex":
        entries = raw.astype(np.float64).view(np.complex128).reshape(m, n)
    else:
        entries = raw.astype(np.float64).reshape(m, n)
    return FrameMatrix(entries, doc["family"], seed=doc.get("seed"),
                       params=doc.get("params", {}))
