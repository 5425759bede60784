"""JSON input and output for the command line.

Rationals are JSON integers or strings ``"p"`` / ``"p/q"``; floats are
refused so that no binary rounding ever enters. Indices of points, colors and
complex vertices are 1-based in files and 0-based in memory; triangulation
vertex ids are opaque integers and pass through unchanged.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .balanced import PointConfig
from .degree import WeightedCover
from .errors import InputError
from .simplicial import OrientedTriangulation, SimplicialComplex

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class Source:
    """A parsed JSON document plus its name, for error locations."""

    def __init__(self, name: str, data: Any):
        self.name = name
        self.data = data

    def fail(self, where: str, msg: str):
        raise InputError(f"{self.name}: {where}: {msg}" if where else f"{self.name}: {msg}")


def load(path: str) -> tuple[Source, bytes]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        where = f"line {exc.lineno} column {exc.colno}" if isinstance(exc, json.JSONDecodeError) else "encoding"
        raise InputError(f"{path}: {where}: invalid JSON") from None
    return Source(path, data), raw


def rational(src: Source, value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        src.fail(where, "expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL.match(value)
        if m:
            num, den = int(m.group(1)), int(m.group(2) or 1)
            if den == 0:
                src.fail(where, f"zero denominator in {value!r}")
            return Fraction(num, den)
        src.fail(where, f"malformed rational {value!r} (use an integer or \"p/q\")")
    if isinstance(value, float):
        src.fail(where, f"floating-point number {value!r} is not allowed; write it as \"p/q\"")
    src.fail(where, f"expected a rational, got {type(value).__name__}")


def integer(src: Source, value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        src.fail(where, f"expected an integer, got {value!r}")
    return value


def require(src: Source, obj: Any, key: str, where: str = "", *alts: str):
    if not isinstance(obj, dict):
        src.fail(where, "expected a JSON object")
    for k in (key,) + alts:
        if k in obj:
            return obj[k]
    src.fail(where, f"missing field {key!r}")


def as_list(src: Source, value: Any, where: str) -> list:
    if not isinstance(value, list):
        src.fail(where, "expected a list")
    return value


def rational_vector(src: Source, value: Any, where: str) -> tuple:
    return tuple(rational(src, x, f"{where}[{i}]") for i, x in enumerate(as_list(src, value, where)))


def fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_vector(v) -> list[str]:
    return [fmt(x) for x in v]


# ---------------------------------------------------------------- schemas


def parse_config(src: Source, obj: Any = None, where: str = "") -> PointConfig:
    """``{"dim": d, "points": [[...], ...], "r": [...]}``.

    ``dim`` is optional and ``"base"`` is accepted in place of ``"r"``.
    """
    obj = src.data if obj is None else obj
    pre = f"{where}." if where else ""
    pts = as_list(src, require(src, obj, "points", where), f"{pre}points")
    points = tuple(rational_vector(src, p, f"{pre}points[{i}]") for i, p in enumerate(pts))
    base = rational_vector(src, require(src, obj, "r", where, "base"), f"{pre}r")
    if not points:
        src.fail(f"{pre}points", "no points")
    if "dim" in obj and integer(src, obj["dim"], f"{pre}dim") != len(base):
        src.fail(f"{pre}dim", f"dim is {obj['dim']} but r has {len(base)} coordinates")
    try:
        return PointConfig(len(base), points, base)
    except InputError as exc:
        src.fail(where, str(exc))


def config_json(config: PointConfig) -> dict:
    return {"dim": config.dim, "points": [fmt_vector(p) for p in config.points], "r": fmt_vector(config.base)}


def _index_set(src: Source, value: Any, where: str, limit: int) -> frozenset:
    out = set()
    for j, x in enumerate(as_list(src, value, where)):
        i = integer(src, x, f"{where}[{j}]")
        if not 1 <= i <= limit:
            src.fail(f"{where}[{j}]", f"index {i} out of range 1..{limit}")
        out.add(i - 1)
    return frozenset(out)


def parse_complex(src: Source) -> SimplicialComplex:
    """``{"vertex_count": n, "facets": [[1, 2], ...]}`` with 1-based vertices."""
    n = integer(src, require(src, src.data, "vertex_count"), "vertex_count")
    if n < 0:
        src.fail("vertex_count", "must be nonnegative")
    facets = as_list(src, require(src, src.data, "facets"), "facets")
    return SimplicialComplex(n, frozenset(_index_set(src, f, f"facets[{i}]", n) for i, f in enumerate(facets)))


def complex_json(cx: SimplicialComplex) -> dict:
    return {"vertex_count": cx.vertex_count, "facets": [[v + 1 for v in f] for f in cx.sorted_facets()]}


def parse_triangulation(src: Source, obj: Any = None, where: str = "") -> OrientedTriangulation:
    """``{"dim": k, "facets": [[ids...]], "orientation_signs": [...]}``."""
    obj = src.data if obj is None else obj
    pre = f"{where}." if where else ""
    dim = integer(src, require(src, obj, "dim", where), f"{pre}dim")
    facets = []
    for i, f in enumerate(as_list(src, require(src, obj, "facets", where), f"{pre}facets")):
        facets.append(tuple(integer(src, u, f"{pre}facets[{i}][{j}]") for j, u in enumerate(as_list(src, f, f"{pre}facets[{i}]"))))
    signs = ()
    if isinstance(obj, dict) and "orientation_signs" in obj:
        raw = as_list(src, obj["orientation_signs"], f"{pre}orientation_signs")
        signs = tuple(integer(src, s, f"{pre}orientation_signs[{i}]") for i, s in enumerate(raw))
    try:
        return OrientedTriangulation(dim, tuple(facets), signs)
    except InputError as exc:
        src.fail(where, str(exc))


def triangulation_json(tri: OrientedTriangulation) -> dict:
    out = {"dim": tri.dim, "facets": [list(f) for f in tri.facets]}
    if any(s != 1 for s in tri.orientation_signs):
        out["orientation_signs"] = list(tri.orientation_signs)
    return out


def vertex_key(src: Source, key: str, where: str) -> int:
    try:
        return int(key)
    except ValueError:
        src.fail(where, f"vertex key {key!r} is not an integer")


def parse_cover(src: Source, obj: Any = None, where: str = "", m: int | None = None) -> WeightedCover:
    """Either ``{"weights": {"vid": [...]}}`` or ``{"m": m, "coloring": {"vid": c}}``.

    Colors are 1-based.
    """
    obj = src.data if obj is None else obj
    pre = f"{where}." if where else ""
    if isinstance(obj, dict) and "coloring" in obj:
        if m is None or "m" in obj:
            m = integer(src, require(src, obj, "m", where), f"{pre}m")
        col = require(src, obj, "coloring", where)
        if not isinstance(col, dict):
            src.fail(f"{pre}coloring", "expected an object mapping vertex ids to colors")
        coloring = {}
        for k, c in col.items():
            c = integer(src, c, f"{pre}coloring[{k!r}]")
            if not 1 <= c <= m:
                src.fail(f"{pre}coloring[{k!r}]", f"color {c} out of range 1..{m}")
            coloring[vertex_key(src, k, f"{pre}coloring")] = c - 1
        return WeightedCover.from_coloring(coloring, m)
    raw = require(src, obj, "weights", where)
    if not isinstance(raw, dict):
        src.fail(f"{pre}weights", "expected an object mapping vertex ids to weight vectors")
    weights = {}
    for k, w in raw.items():
        weights[vertex_key(src, k, f"{pre}weights")] = rational_vector(src, w, f"{pre}weights[{k!r}]")
    try:
        return WeightedCover(weights)
    except InputError as exc:
        src.fail(f"{pre}weights", str(exc))


def cover_json(cover: WeightedCover) -> dict:
    return {"weights": {str(u): fmt_vector(w) for u, w in sorted(cover.weights.items())}}


def parse_carriers(src: Source, obj: Any, where: str, n: int) -> dict:
    if not isinstance(obj, dict):
        src.fail(where, "expected an object mapping vertex ids to index lists")
    return {vertex_key(src, k, where): _index_set(src, v, f"{where}[{k!r}]", n) for k, v in obj.items()}


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
