"""JSON encodings for signals, phase functions and report objects.

Complex arrays are stored as nested lists of ``[re, im]`` pairs; signals are
in lexicographic element order and phase functions in phase-index order.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .group import FiniteAbelianGroup

__all__ = [
    "InputError",
    "encode_complex",
    "decode_complex",
    "signal_to_json",
    "signal_from_json",
    "phase_function_to_json",
    "phase_function_from_json",
    "to_jsonable",
    "dumps",
    "load_json",
]


class InputError(ValueError):
    """Malformed input file or payload."""


def encode_complex(a) -> list:
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def decode_complex(data, shape=None) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise InputError("expected an array of [re, im] pairs")
    out = arr[..., 0] + 1j * arr[..., 1]
    if shape is not None and out.shape != tuple(shape):
        raise InputError(f"expected shape {tuple(shape)}, got {out.shape}")
    return out


def signal_to_json(g: FiniteAbelianGroup, f) -> dict:
    return {"group": g.to_json(), "values": encode_complex(f)}


def signal_from_json(data: dict) -> tuple[FiniteAbelianGroup, np.ndarray]:
    g = FiniteAbelianGroup.from_json(data["group"])
    return g, decode_complex(data["values"], (g.size,))


def phase_function_to_json(g: FiniteAbelianGroup, F) -> dict:
    return {"group": g.to_json(), "values": encode_complex(F)}


def phase_function_from_json(data: dict) -> tuple[FiniteAbelianGroup, np.ndarray]:
    g = FiniteAbelianGroup.from_json(data["group"])
    return g, decode_complex(data["values"], (g.size**2,))


def to_jsonable(obj):
    """Recursively convert numpy scalars, fractions and report objects."""
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, Fraction):
        return {"exact": str(obj), "value": float(obj)}
    return obj


def dumps(obj) -> str:
    """Deterministic JSON (sorted keys, full ``repr`` precision)."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)


def load_json(path) -> dict:
    """Read a JSON file, turning decode errors into :class:`InputError` with a location."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
