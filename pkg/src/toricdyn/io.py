"""File formats: matrices, fans, weights and report serialization.

Integers that may grow without bound are written as decimal strings.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Sequence

from .cones import make_cone
from .errors import DimensionMismatchError, InputError
from .fans import Fan
from .linalg import as_matrix
from .weights import MinkowskiWeight


def _int(x: Any) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InputError(f"expected an integer or decimal string, got {x!r}")
    try:
        return int(x)
    except ValueError:
        raise InputError(f"not an integer: {x!r}") from None


def parse_matrix(text: str) -> tuple[tuple[int, ...], ...]:
    """JSON array of rows (ints or decimal strings), or plain text: "n" then n rows."""
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            rows = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise InputError(f"bad matrix JSON: {e}") from None
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise InputError("matrix JSON must be an array of arrays")
        return as_matrix([[_int(x) for x in r] for r in rows])
    lines = [ln.split() for ln in stripped.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise InputError("plain-text matrix must start with a line holding n")
    n = _int(lines[0][0])
    rows = lines[1:]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InputError(f"expected {n} rows of {n} integers")
    return as_matrix([[_int(x) for x in r] for r in rows])


def read_matrix(path: str | Path) -> tuple[tuple[int, ...], ...]:
    return parse_matrix(Path(path).read_text())


def matrix_to_json(A: Sequence[Sequence[int]]) -> list[list[str]]:
    return [[str(x) for x in row] for row in A]


def fan_to_json(fan: Fan) -> dict:
    return {"rank": str(fan.n),
            "cones": [{"generators": [[str(x) for x in r] for r in c.rays]} for c in fan.maximal]}


def fan_from_json(data: dict, complete: bool = True) -> Fan:
    try:
        n = _int(data["rank"])
        cones = [[[_int(x) for x in g] for g in c["generators"]] for c in data["cones"]]
    except (KeyError, TypeError) as e:
        raise InputError(f"bad fan JSON: {e}") from None
    for gens in cones:
        if any(len(g) != n for g in gens):
            raise DimensionMismatchError(f"generator of wrong length in fan of rank {n}")
    return Fan.from_maximal([make_cone(g, n) for g in cones], n, complete)


def weight_to_json(c: MinkowskiWeight) -> dict:
    return {"codim": str(c.codim),
            "values": [{"cone": [[str(x) for x in r] for r in cone.rays], "value": str(val)}
                       for cone, val in c.support()]}


def weight_from_json(data: dict, fan: Fan) -> MinkowskiWeight:
    try:
        k = _int(data["codim"])
        entries = [([[_int(x) for x in g] for g in e["cone"]], _int(e["value"])) for e in data["values"]]
    except (KeyError, TypeError) as e:
        raise InputError(f"bad weight JSON: {e}") from None
    values = {}
    for gens, val in entries:
        cone = make_cone(gens, fan.n)
        if cone not in fan:
            raise InputError(f"cone {gens} is not in the fan")
        if cone.codim != k:
            raise InputError(f"cone {gens} has codimension {cone.codim}, weight has {k}")
        values[cone.key] = values.get(cone.key, 0) + val
    return MinkowskiWeight(fan, k, values)


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: {e}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
