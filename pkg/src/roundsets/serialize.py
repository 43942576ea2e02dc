"""Strict JSON schema for sets and halfspaces.

Three document kinds, dispatched on the ``"kind"`` field::

    {"kind": "ccg", "c": [..], "G": [[row], ..], "groups":
        [{"idx": [1-based ints], "p": "1"|"2"|"inf", "r": real}, ..],
     "A": [[row], ..], "b": [..]}
    {"kind": "rcg", "outer": <ccg>, "inner": <ccg>}
    {"kind": "halfspace", "h": [..], "f": real}

``G`` and ``A`` are row-major; ``A: []`` and ``b: []`` denote no equality
constraints. Unknown keys are rejected. :func:`emit_set_json` writes a
canonical byte form, so ``parse(emit(s)) == s`` and re-emitting is
byte-identical.
"""

from __future__ import annotations

import json
import math
from typing import Union

import numpy as np

from .errors import ParseError
from .sets import Ccg, Halfspace, NormGroup, Rcg, validate_ccg, validate_rcg

_P_TOKENS = {"1": 1.0, "2": 2.0, "inf": math.inf}
_P_NAMES = {1.0: "1", 2.0: "2", math.inf: "inf"}

SetValue = Union[Ccg, Rcg, Halfspace]


def _require_keys(obj: dict, keys: tuple, what: str) -> None:
    if not isinstance(obj, dict):
        raise ParseError(f"{what} must be a JSON object, got {type(obj).__name__}")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise ParseError(f"{what} is missing keys {missing}")
    unknown = [k for k in obj if k not in keys]
    if unknown:
        raise ParseError(f"{what} has unknown keys {unknown}")


def _number_list(x, what: str) -> list:
    if not isinstance(x, list) or any(isinstance(v, (bool, str, list, dict)) for v in x):
        raise ParseError(f"{what} must be a flat list of numbers")
    return x


def _row_major(x, what: str) -> list:
    if not isinstance(x, list):
        raise ParseError(f"{what} must be a list of rows")
    return [_number_list(row, f"{what} row") for row in x]


def _parse_ccg(obj: dict, what: str = "ccg") -> Ccg:
    _require_keys(obj, ("kind", "c", "G", "groups", "A", "b"), what)
    if obj["kind"] != "ccg":
        raise ParseError(f"{what}: expected kind 'ccg', got {obj['kind']!r}")
    if not isinstance(obj["groups"], list):
        raise ParseError(f"{what}: groups must be a list")
    groups = []
    for i, g in enumerate(obj["groups"]):
        _require_keys(g, ("idx", "p", "r"), f"{what} group {i}")
        idx = g["idx"]
        if not isinstance(idx, list) or any(
            isinstance(v, bool) or not isinstance(v, int) for v in idx
        ):
            raise ParseError(f"{what} group {i}: idx must be a list of integers")
        if not isinstance(g["p"], str) or g["p"] not in _P_TOKENS:
            raise ParseError(f"{what} group {i}: p must be one of '1', '2', 'inf'")
        if isinstance(g["r"], (bool, str, list, dict)):
            raise ParseError(f"{what} group {i}: r must be a number")
        groups.append(NormGroup(tuple(idx), _P_TOKENS[g["p"]], float(g["r"])))
    s = Ccg(
        c=_number_list(obj["c"], f"{what}.c"),
        G=_row_major(obj["G"], f"{what}.G"),
        groups=tuple(groups),
        A=_row_major(obj["A"], f"{what}.A"),
        b=_number_list(obj["b"], f"{what}.b"),
    )
    return validate_ccg(s)


def _parse_rcg(obj: dict) -> Rcg:
    _require_keys(obj, ("kind", "outer", "inner"), "rcg")
    if obj["kind"] != "rcg":
        raise ParseError(f"rcg: expected kind 'rcg', got {obj['kind']!r}")
    outer = _parse_ccg(obj["outer"], "rcg.outer")
    inner = _parse_ccg(obj["inner"], "rcg.inner")
    return validate_rcg(Rcg(outer, inner))


def _parse_halfspace(obj: dict) -> Halfspace:
    _require_keys(obj, ("kind", "h", "f"), "halfspace")
    if obj["kind"] != "halfspace":
        raise ParseError(f"halfspace: expected kind 'halfspace', got {obj['kind']!r}")
    if isinstance(obj["f"], (bool, str, list, dict)):
        raise ParseError("halfspace: f must be a number")
    return Halfspace(_number_list(obj["h"], "halfspace.h"), float(obj["f"]))


def parse_set_json(text: Union[str, bytes]) -> SetValue:
    """Parse and validate one set or halfspace document.

    Raises ParseError on malformed JSON, a wrong or missing kind, unknown
    keys, or mistyped values; validation errors propagate unchanged.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        obj = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as err:
        raise ParseError(f"invalid JSON: {err}") from err
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError("document must be an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "ccg":
        return _parse_ccg(obj)
    if kind == "rcg":
        return _parse_rcg(obj)
    if kind == "halfspace":
        return _parse_halfspace(obj)
    raise ParseError(f"unknown kind {kind!r}")


def _ccg_obj(s: Ccg) -> dict:
    return {
        "kind": "ccg",
        "c": s.c.tolist(),
        "G": s.G.tolist(),
        "groups": [
            {"idx": list(g.indices), "p": _P_NAMES[g.p], "r": g.radius}
            for g in s.groups
        ],
        "A": s.A.tolist(),
        "b": s.b.tolist(),
    }


def emit_set_json(value: SetValue) -> bytes:
    """Serialize to canonical UTF-8 JSON (fixed key order, compact)."""
    if isinstance(value, Ccg):
        obj = _ccg_obj(value)
    elif isinstance(value, Rcg):
        obj = {
            "kind": "rcg",
            "outer": _ccg_obj(value.outer),
            "inner": _ccg_obj(value.inner),
        }
    elif isinstance(value, Halfspace):
        obj = {"kind": "halfspace", "h": value.h.tolist(), "f": value.f}
    else:
        raise ParseError(f"cannot serialize {type(value).__name__}")
    return json.dumps(obj, separators=(",", ":")).encode("utf-8")
