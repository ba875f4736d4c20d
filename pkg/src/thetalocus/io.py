"""JSON encoding for the package's value types.

Floats are written in scientific notation with 17 significant digits so
reports diff cleanly and round-trip exactly.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .charalg import Characteristic, CharacteristicError
from .incidence import IncidenceError, IncidenceReport
from .siegel import PeriodMatrix, SiegelError


class SchemaError(ValueError):
    pass


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return f"{x:.16e}"


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """``json.dumps`` with floats in ``%.16e`` form and keys in insertion order."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, type(None), str)):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, set, frozenset)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, bool, str, np.number)) or v is None for v in seq):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in seq) + "\n" + end + "]"
    if hasattr(obj, "to_json"):
        return dumps(obj.to_json(), indent, _level)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def detect(obj: dict) -> str:
    if "point" in obj and "vanishing_even" in obj:
        return "incidence_report"
    if "top" in obj or "bottom" in obj:
        return "characteristic"
    if "re" in obj or "im" in obj:
        return "period_matrix"
    raise SchemaError("unrecognised document: expected a period matrix, characteristic or incidence report")


def decode(obj: dict):
    kind = detect(obj)
    try:
        if kind == "characteristic":
            return Characteristic.from_json(obj)
        if kind == "period_matrix":
            return PeriodMatrix.from_json(obj)
        return IncidenceReport.from_json(obj)
    except (CharacteristicError, SiegelError, IncidenceError) as exc:
        raise SchemaError(f"{kind}: {exc}") from exc


def load(path) -> object:
    return decode(json.loads(Path(path).read_text()))


def load_period_matrix(path) -> PeriodMatrix:
    value = load(path)
    if not isinstance(value, PeriodMatrix):
        raise SchemaError(f"{path} does not hold a period matrix")
    return value


def load_vector(path, genus: int) -> np.ndarray:
    """A complex g-vector stored as ``{"re": [...], "im": [...]}`` or a plain list of reals."""
    obj = json.loads(Path(path).read_text())
    if isinstance(obj, list):
        v = np.array(obj, dtype=complex)
    else:
        v = np.array(obj.get("re", [0.0] * genus), dtype=float) + 1j * np.array(obj.get("im", [0.0] * genus), dtype=float)
    if v.shape != (genus,):
        raise SchemaError(f"z must have length {genus}, got shape {v.shape}")
    return v


def _equal(a, b) -> bool:
    if isinstance(a, IncidenceReport):
        return (
            a.point.to_json() == b.point.to_json()
            and a.vanishing_even == b.vanishing_even
            and a.magnitudes == b.magnitudes
        )
    return a == b


def io_roundtrip(path) -> bool:
    """parse -> serialize -> parse; True iff both parses give the same value."""
    first = load(path)
    second = decode(json.loads(dumps(first)))
    return _equal(first, second)
