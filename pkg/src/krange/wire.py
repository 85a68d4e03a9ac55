"""Wire formats: canonical JSON for tuples/vectors/reports and the CSV
sweep table.

Documents are UTF-8 JSON with a fixed field order and floats rendered
with 17 significant digits, which makes load -> re-serialize round trips
byte-identical. Matrices are stored row-major as [re, im] pairs:

    matrix  {"rows": r, "cols": c, "data": [[re, im], ...]}
    vector  {"dim": d, "data": [[re, im], ...]}
    tuple   {"dim": d, "signature": [1, 1, -1], "ops": [matrix, ...],
             "meta": {...}?}

CSV uses '.' as the decimal mark, ',' as the separator, and a mandatory
header row.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .errors import WireFormatError
from .krein import Signature
from .tuples import SignedOperatorTuple


def format_float(x: float) -> str:
    """Render a float with 17 significant digits (parse-exact)."""
    if not math.isfinite(x):
        raise WireFormatError(f"cannot serialize non-finite value {x!r}")
    return format(float(x), ".17g")


def _emit(obj: Any, indent: int, out: list[str]) -> None:
    pad = " " * indent
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise WireFormatError(f"object keys must be strings, got {key!r}")
            out.append(pad + "  " + json.dumps(key, ensure_ascii=False) + ": ")
            _emit(value, indent + 2, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(obj):
            out.append(pad + "  ")
            _emit(value, indent + 2, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    else:
        raise WireFormatError(f"cannot serialize object of type {type(obj).__name__}")


def dumps_canonical(obj: Any) -> str:
    """Deterministic JSON text (insertion-ordered keys, 17-digit floats),
    terminated by a newline."""
    out: list[str] = []
    _emit(obj, 0, out)
    out.append("\n")
    return "".join(out)


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise WireFormatError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise WireFormatError(f"{where}: non-finite number")
    return float(value)


def _pairs_to_complex(data: Any, count: int, where: str) -> np.ndarray:
    if not isinstance(data, list) or len(data) != count:
        raise WireFormatError(f"{where}: expected {count} [re, im] pairs")
    flat = np.empty(count, dtype=np.complex128)
    for i, pair in enumerate(data):
        if not isinstance(pair, list) or len(pair) != 2:
            raise WireFormatError(f"{where}[{i}]: expected an [re, im] pair")
        flat[i] = complex(_number(pair[0], f"{where}[{i}][0]"), _number(pair[1], f"{where}[{i}][1]"))
    return flat


def _complex_to_pairs(flat: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in flat]


def encode_matrix(a: np.ndarray) -> dict:
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise WireFormatError(f"matrix must be 2-D, got shape {arr.shape}")
    return {
        "rows": int(arr.shape[0]),
        "cols": int(arr.shape[1]),
        "data": _complex_to_pairs(arr.reshape(-1)),
    }


def decode_matrix(doc: Any, where: str = "matrix") -> np.ndarray:
    if not isinstance(doc, dict):
        raise WireFormatError(f"{where}: expected an object")
    try:
        rows, cols = int(doc["rows"]), int(doc["cols"])
    except (KeyError, TypeError, ValueError) as exc:
        raise WireFormatError(f"{where}: missing or malformed rows/cols") from exc
    if rows < 1 or cols < 1:
        raise WireFormatError(f"{where}: rows and cols must be >= 1")
    flat = _pairs_to_complex(doc.get("data"), rows * cols, f"{where}.data")
    return flat.reshape(rows, cols)


def encode_vector(v: np.ndarray) -> dict:
    arr = np.asarray(v, dtype=np.complex128).reshape(-1)
    return {"dim": int(arr.size), "data": _complex_to_pairs(arr)}


def decode_vector(doc: Any, where: str = "vector") -> np.ndarray:
    if not isinstance(doc, dict):
        raise WireFormatError(f"{where}: expected an object")
    try:
        dim = int(doc["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise WireFormatError(f"{where}: missing or malformed dim") from exc
    if dim < 1:
        raise WireFormatError(f"{where}: dim must be >= 1")
    return _pairs_to_complex(doc.get("data"), dim, f"{where}.data")


def encode_tuple(t: SignedOperatorTuple, meta: dict | None = None) -> dict:
    doc = {
        "dim": t.dim,
        "signature": list(t.signature.signs),
        "ops": [encode_matrix(op) for op in t.ops],
    }
    if meta is not None:
        doc["meta"] = meta
    return doc


def decode_tuple(doc: Any) -> tuple[SignedOperatorTuple, dict | None]:
    if not isinstance(doc, dict):
        raise WireFormatError("tuple document: expected an object")
    try:
        dim = int(doc["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise WireFormatError("tuple document: missing or malformed dim") from exc
    signature = doc.get("signature")
    if not isinstance(signature, list) or not signature:
        raise WireFormatError("tuple document: missing signature")
    if any(s not in (1, -1) for s in signature):
        raise WireFormatError(f"tuple document: signature entries must be +1/-1, got {signature}")
    ops_doc = doc.get("ops")
    if not isinstance(ops_doc, list) or len(ops_doc) != len(signature):
        raise WireFormatError("tuple document: ops must match the signature length")
    ops = []
    for j, op_doc in enumerate(ops_doc):
        op = decode_matrix(op_doc, where=f"ops[{j}]")
        if op.shape != (dim, dim):
            raise WireFormatError(f"ops[{j}]: expected shape ({dim}, {dim}), got {op.shape}")
        ops.append(op)
    meta = doc.get("meta")
    if meta is not None and not isinstance(meta, dict):
        raise WireFormatError("tuple document: meta must be an object")
    try:
        tup = SignedOperatorTuple(ops, Signature(tuple(int(s) for s in signature)))
    except Exception as exc:
        raise WireFormatError(f"tuple document: {exc}") from exc
    return tup, meta


def loads_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise WireFormatError(f"malformed JSON: {exc}") from exc


def load_tuple_file(path) -> tuple[SignedOperatorTuple, dict | None]:
    with open(path, "r", encoding="utf-8") as fh:
        return decode_tuple(loads_json(fh.read()))


def save_tuple_file(path, t: SignedOperatorTuple, meta: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(encode_tuple(t, meta)))


def load_vector_file(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return decode_vector(loads_json(fh.read()))


def save_vector_file(path, v: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(encode_vector(v)))


SWEEP_CSV_HEADER = "eps,residual,krein_norm_sq,target_norm_sq,monotone_ok"


def sweep_csv(rows: list[dict]) -> str:
    """CSV table for a sweep; each row needs the header's fields."""
    lines = [SWEEP_CSV_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                [
                    format_float(row["eps"]),
                    format_float(row["residual"]),
                    format_float(row["krein_norm_sq"]),
                    format_float(row["target_norm_sq"]),
                    "true" if row["monotone_ok"] else "false",
                ]
            )
        )
    return "\n".join(lines) + "\n"
