"""JSON file formats for algebroids, bivectors and maps.

Algebroid::

    {"chart": ["x", "y"], "rank": 2, "scalars": "complex",
     "anchor": [["1", "0"], ["0", "1"]],
     "structure": {"1,2": ["0", "0"]}}

Structure keys are 1-based "i,j" with i < j; missing entries are zero.
Bivector: ``{"chart": [...], "components": {"j,k": expr}}`` with j < k.
Map: ``{"source_chart": [...], "target_chart": [...], "components": [...]}``.
Any file may carry an ``"expected"`` object used by the golden tests.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .algebroid import COMPLEX, REAL, ChartedAlgebroid
from .errors import DivisionByZeroExpr, ParseError, ShapeMismatch
from .geometry import Bivector
from .symexpr import RationalExpr, parse

SCHEMA_VERSION = 1


def _require(data: dict, key: str, kind, where: str):
    if key not in data:
        raise ParseError(f"{where}: missing key {key!r}")
    val = data[key]
    if not isinstance(val, kind):
        raise ParseError(f"{where}: key {key!r} has the wrong type")
    return val


def _chart(data: dict, key: str, where: str) -> tuple[str, ...]:
    chart = _require(data, key, list, where)
    if not all(isinstance(c, str) and c.isidentifier() and c != "i" for c in chart):
        raise ParseError(f"{where}: chart names must be identifiers other than 'i'")
    if len(set(chart)) != len(chart):
        raise ParseError(f"{where}: repeated chart coordinate")
    return tuple(chart)


def _expr(text, chart, where: str) -> RationalExpr:
    if isinstance(text, int) and not isinstance(text, bool):
        text = str(text)
    if not isinstance(text, str):
        raise ParseError(f"{where}: expressions must be strings")
    try:
        return parse(text, chart)
    except DivisionByZeroExpr:
        raise ParseError(f"{where}: {text!r} divides by zero") from None


def _pair_key(key: str, where: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in key.split(","))
    except ValueError:
        raise ParseError(f"{where}: bad index key {key!r}") from None
    return a, b


def load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be an object")
    return data


def file_kind(data: dict) -> str:
    if "anchor" in data:
        return "algebroid"
    if "source_chart" in data:
        return "map"
    if "components" in data:
        return "bivector"
    raise ParseError("cannot tell file kind: expected 'anchor', 'components' or 'source_chart'")


# ---------------------------------------------------------------------------
# algebroids


def algebroid_from_json(data: dict, where: str = "algebroid") -> ChartedAlgebroid:
    chart = _chart(data, "chart", where)
    rank = _require(data, "rank", int, where)
    scalars = data.get("scalars", COMPLEX)
    if scalars not in (REAL, COMPLEX):
        raise ParseError(f"{where}: scalars must be 'real' or 'complex'")
    rows = _require(data, "anchor", list, where)
    if len(rows) != rank or any(not isinstance(row, list) or len(row) != len(chart) for row in rows):
        raise ParseError(f"{where}: anchor must be a {rank}x{len(chart)} matrix")
    anchor = tuple(tuple(_expr(c, chart, where) for c in row) for row in rows)
    structure = {}
    for key, coeffs in data.get("structure", {}).items():
        i, j = _pair_key(key, where)
        if not (1 <= i < j <= rank):
            raise ParseError(f"{where}: structure key {key!r} needs 1 <= i < j <= rank")
        if not isinstance(coeffs, list) or len(coeffs) != rank:
            raise ParseError(f"{where}: structure entry {key!r} needs {rank} expressions")
        structure[(i - 1, j - 1)] = tuple(_expr(c, chart, where) for c in coeffs)
    try:
        return ChartedAlgebroid(chart, rank, scalars, anchor, structure)
    except (ValueError, ShapeMismatch) as exc:
        raise ParseError(f"{where}: {exc}") from None


def algebroid_to_json(A: ChartedAlgebroid) -> dict:
    return {
        "chart": list(A.chart),
        "rank": A.rank,
        "scalars": A.scalars,
        "anchor": [[str(c) for c in row] for row in A.anchor],
        "structure": {f"{i + 1},{j + 1}": [str(c) for c in cs] for (i, j), cs in A.structure.items()},
    }


def load_algebroid(path) -> ChartedAlgebroid:
    return algebroid_from_json(load_json(path), str(path))


# ---------------------------------------------------------------------------
# bivectors


def bivector_from_json(data: dict, where: str = "bivector") -> Bivector:
    chart = _chart(data, "chart", where)
    comps = _require(data, "components", dict, where)
    for key, text in comps.items():
        j, k = _pair_key(key, where)
        if not (1 <= j <= len(chart) and 1 <= k <= len(chart)):
            raise ParseError(f"{where}: component key {key!r} out of range for {len(chart)} coordinates")
        if not isinstance(text, (str, int)) or isinstance(text, bool):
            raise ParseError(f"{where}: expressions must be strings")
    try:
        return Bivector.from_strings(chart, {k: str(v) for k, v in comps.items()})
    except DivisionByZeroExpr:
        raise ParseError(f"{where}: a component divides by zero") from None


def bivector_to_json(pi: Bivector) -> dict:
    return {"chart": list(pi.chart), "components": pi.to_strings()}


def load_bivector(path) -> Bivector:
    return bivector_from_json(load_json(path), str(path))


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class ChartMap:
    source_chart: tuple[str, ...]
    target_chart: tuple[str, ...]
    components: tuple[RationalExpr, ...]

    def to_dict(self) -> dict:
        return {
            "source_chart": list(self.source_chart),
            "target_chart": list(self.target_chart),
            "components": [str(c) for c in self.components],
        }


def map_from_json(data: dict, where: str = "map") -> ChartMap:
    src = _chart(data, "source_chart", where)
    tgt = _chart(data, "target_chart", where)
    comps = _require(data, "components", list, where)
    if len(comps) != len(tgt):
        raise ParseError(f"{where}: need one component per target coordinate ({len(tgt)})")
    return ChartMap(src, tgt, tuple(_expr(c, src, where) for c in comps))


def load_map(path) -> ChartMap:
    return map_from_json(load_json(path), str(path))


# ---------------------------------------------------------------------------
# reports


def dumps_report(report: dict[str, Any]) -> str:
    """Byte-stable JSON: sorted keys, fixed separators, trailing newline."""
    body = {"schema_version": SCHEMA_VERSION, **report}
    return json.dumps(body, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
