"""RMP problem files: a small, audit-friendly JSON format.

Document layout (version 1)::

    {
      "version": 1,
      "field": "real" | "complex",
      "n": <int>, "k": <int>,
      "A": <n x n>, "e": <n x k>, "D": <k x k>, "f": <n x k>,
      "G": <n x n>,        # optional, with x and y: a stored inverse
      "x": <n x k>,        # optional
      "y": <n x k>,        # optional
      "inverse": <n x n>   # optional dense inverse
    }

Matrices are nested row-major lists; complex entries are [re, im] pairs.
Floats survive a write/read round trip bit-identically (shortest
round-trip decimal form).  Parsing is strict: wrong version, unknown
keys, shape mismatches and non-finite values are all rejected.
"""

import json

import numpy as np

from .errors import ParseError

__all__ = ["RMP_VERSION", "RmpDocument", "read_problem_file", "write_problem_file"]

RMP_VERSION = 1

_REQUIRED_KEYS = ("version", "field", "n", "k", "A", "e", "D", "f")
_OPTIONAL_KEYS = ("G", "x", "y", "inverse")


class RmpDocument:
    """Parsed RMP payload; matrices are ndarrays, optionals may be None."""

    def __init__(self, field, n, k, A, e, D, f, G=None, x=None, y=None, inverse=None):
        self.field = field
        self.n = n
        self.k = k
        self.A = A
        self.e = e
        self.D = D
        self.f = f
        self.G = G
        self.x = x
        self.y = y
        self.inverse = inverse

    @property
    def has_inverse_factors(self):
        return self.G is not None and self.x is not None and self.y is not None


def _reject_constant(token):
    raise ParseError(f"non-finite JSON token {token!r} is not allowed")


def _entry(value, field, where):
    if field == "real":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"{where}: expected a real number, got {value!r}")
        return float(value)
    if (
        not isinstance(value, list)
        or len(value) != 2
        or any(isinstance(p, bool) or not isinstance(p, (int, float)) for p in value)
    ):
        raise ParseError(f"{where}: expected an [re, im] pair, got {value!r}")
    return complex(value[0], value[1])


def _decode_matrix(obj, rows, cols, field, name):
    if not isinstance(obj, list) or len(obj) != rows:
        raise ParseError(f"{name}: expected {rows} rows")
    dtype = np.complex128 if field == "complex" else np.float64
    out = np.empty((rows, cols), dtype=dtype)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"{name}: row {i} must have {cols} entries")
        for j, value in enumerate(row):
            out[i, j] = _entry(value, field, f"{name}[{i}][{j}]")
    if not np.all(np.isfinite(out)):
        raise ParseError(f"{name}: non-finite entries")
    return out


def _encode_matrix(matrix, field):
    m = np.asarray(matrix)
    if field == "complex":
        m = m.astype(np.complex128)
        return [[[float(v.real), float(v.imag)] for v in row] for row in m]
    return [[float(v) for v in row] for row in m.astype(np.float64)]


def read_problem_file(path):
    """Parse an RMP file; raises ParseError on any schema violation."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh, parse_constant=_reject_constant)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from None

    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    unknown = set(doc) - set(_REQUIRED_KEYS) - set(_OPTIONAL_KEYS)
    if unknown:
        raise ParseError(f"unknown keys: {sorted(unknown)}")
    missing = [key for key in _REQUIRED_KEYS if key not in doc]
    if missing:
        raise ParseError(f"missing keys: {missing}")
    if doc["version"] != RMP_VERSION:
        raise ParseError(f"unsupported version {doc['version']!r}, expected {RMP_VERSION}")
    field = doc["field"]
    if field not in ("real", "complex"):
        raise ParseError(f"field must be 'real' or 'complex', got {field!r}")
    n, k = doc["n"], doc["k"]
    if isinstance(n, bool) or isinstance(k, bool) \
            or not isinstance(n, int) or not isinstance(k, int) or n < 1 or k < 1:
        raise ParseError(f"n and k must be positive integers, got {n!r}, {k!r}")

    shapes = {"A": (n, n), "e": (n, k), "D": (k, k), "f": (n, k),
              "G": (n, n), "x": (n, k), "y": (n, k), "inverse": (n, n)}
    values = {}
    for name in ("A", "e", "D", "f"):
        values[name] = _decode_matrix(doc[name], *shapes[name], field, name)
    for name in _OPTIONAL_KEYS:
        values[name] = (
            _decode_matrix(doc[name], *shapes[name], field, name)
            if name in doc else None
        )
    return RmpDocument(field=field, n=n, k=k, **values)


def write_problem_file(path, problem, inverse=None, dense_inverse=None):
    """Write a problem (optionally with its structured/dense inverse)."""
    field = problem.field
    doc = {
        "version": RMP_VERSION,
        "field": field,
        "n": problem.n,
        "k": problem.k,
        "A": _encode_matrix(problem.A, field),
        "e": _encode_matrix(problem.e, field),
        "D": _encode_matrix(problem.D, field),
        "f": _encode_matrix(problem.f, field),
    }
    if inverse is not None:
        doc["G"] = _encode_matrix(inverse.G, field)
        doc["x"] = _encode_matrix(inverse.x, field)
        doc["y"] = _encode_matrix(inverse.y, field)
    if dense_inverse is not None:
        doc["inverse"] = _encode_matrix(dense_inverse, field)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
