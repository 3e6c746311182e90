"""JSON documents for domains, segment sets and paths; CSV helpers."""
from __future__ import annotations

import csv
import json
import math
import re
from fractions import Fraction

from .domain import PolygonalDomain
from .errors import DomainValidationError, InvalidInput
from .geom import Polyline, SimplePolygon

_DYADIC = re.compile(r"\s*([+-]?\d+)\s*/\s*2\^(\d+)\s*")
DOMAIN_KEYS = ("holes", "outer", "points", "slits")


def parse_number(value, path: str = "$") -> float:
    """A JSON number, or a string "p/2^q" that is exactly a double."""
    if isinstance(value, bool):
        raise DomainValidationError("expected a number", path)
    if isinstance(value, (int, float)):
        v = float(value)
    elif isinstance(value, str):
        m = _DYADIC.fullmatch(value)
        if not m:
            raise DomainValidationError(f"expected a number or 'p/2^q', got {value!r}", path)
        exact = Fraction(int(m.group(1)), 2 ** int(m.group(2)))
        try:
            v = float(exact)
        except OverflowError:
            raise DomainValidationError(f"{value!r} overflows a double", path) from None
        if Fraction(v) != exact:
            raise DomainValidationError(f"{value!r} is not exactly representable", path)
    else:
        raise DomainValidationError(f"expected a number, got {type(value).__name__}", path)
    if not math.isfinite(v):
        raise DomainValidationError("non-finite number", path)
    return v


def parse_point(value, path: str = "$") -> tuple[float, float]:
    if not isinstance(value, list) or len(value) != 2:
        raise DomainValidationError("expected [x, y]", path)
    return parse_number(value[0], f"{path}[0]"), parse_number(value[1], f"{path}[1]")


def _point_list(value, path: str) -> tuple:
    if not isinstance(value, list):
        raise DomainValidationError("expected an array of points", path)
    return tuple(parse_point(p, f"{path}[{i}]") for i, p in enumerate(value))


def _build(kind, pts, path):
    try:
        return kind(pts)
    except DomainValidationError:
        raise
    except InvalidInput as exc:
        raise DomainValidationError(str(exc), path) from None


def domain_from_dict(doc) -> PolygonalDomain:
    if not isinstance(doc, dict):
        raise DomainValidationError("expected an object", "$")
    extra = set(doc) - set(DOMAIN_KEYS)
    if extra:
        raise DomainValidationError(f"unknown key {sorted(extra)[0]!r}", "$")
    outer = doc.get("outer")
    if outer is not None:
        outer = _build(SimplePolygon, _point_list(outer, "$.outer"), "$.outer")
    groups = {}
    for key, kind in (("holes", SimplePolygon), ("slits", Polyline)):
        items = doc.get(key, [])
        if not isinstance(items, list):
            raise DomainValidationError("expected an array", f"$.{key}")
        groups[key] = tuple(
            _build(kind, _point_list(v, f"$.{key}[{i}]"), f"$.{key}[{i}]") for i, v in enumerate(items)
        )
    points = _point_list(doc.get("points", []), "$.points")
    dom = PolygonalDomain(outer, groups["holes"], groups["slits"], points)
    try:
        dom.validate()
    except DomainValidationError as exc:
        where = exc.path or "domain"
        raise DomainValidationError(exc.reason, "$" if where == "domain" else f"$.{where}") from None
    return dom


def parse_domain(text: str) -> PolygonalDomain:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainValidationError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", "$") from None
    return domain_from_dict(doc)


def load_domain(path) -> PolygonalDomain:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    return parse_domain(text)


def format_number(v: float) -> str:
    return format(float(v), ".17g")


def _dump(obj) -> str:
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_dump(obj[k])}" for k in sorted(obj)) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dump(v) for v in obj) + "]"
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, float)):
        return format_number(obj)
    return json.dumps(obj)


def canonical_json(obj) -> str:
    """Sorted keys, every number printed with 17 significant digits, trailing newline."""
    return _dump(obj) + "\n"


def domain_to_dict(dom: PolygonalDomain) -> dict:
    pts = lambda vs: [[p[0], p[1]] for p in vs]  # noqa: E731
    return {
        "outer": pts(dom.outer.vertices) if dom.outer is not None else None,
        "holes": [pts(h.vertices) for h in dom.holes],
        "slits": [pts(s.vertices) for s in dom.slits],
        "points": pts(dom.points),
    }


def serialize_domain(dom: PolygonalDomain) -> str:
    return canonical_json(domain_to_dict(dom))


def parse_segments(text: str) -> list:
    """Segment set document: [[[x1, y1], [x2, y2]], ...]."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainValidationError(f"malformed JSON: {exc.msg}", "$") from None
    if not isinstance(doc, list) or not doc:
        raise DomainValidationError("expected a non-empty array of segments", "$")
    out = []
    for i, s in enumerate(doc):
        if not isinstance(s, list) or len(s) != 2:
            raise DomainValidationError("expected [[x1, y1], [x2, y2]]", f"$[{i}]")
        out.append((parse_point(s[0], f"$[{i}][0]"), parse_point(s[1], f"$[{i}][1]")))
    return out


def path_document(path) -> str:
    return canonical_json(path.as_dict())


def parse_point_arg(text: str) -> tuple[float, float]:
    """Command-line point "x,y"."""
    parts = text.split(",")
    if len(parts) != 2:
        raise InvalidInput(f"expected x,y, got {text!r}")
    try:
        p = float(parts[0]), float(parts[1])
    except ValueError:
        raise InvalidInput(f"expected x,y, got {text!r}") from None
    if not all(math.isfinite(c) for c in p):
        raise InvalidInput(f"non-finite point {text!r}")
    return p


def read_pairs_csv(fh) -> list:
    """Rows x1,y1,x2,y2; an optional header row is skipped."""
    pairs = []
    for lineno, row in enumerate(csv.reader(fh), 1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise InvalidInput(f"pairs line {lineno}: expected 4 columns, got {len(row)}")
        try:
            vals = [float(c) for c in row]
        except ValueError:
            if lineno == 1:
                continue
            raise InvalidInput(f"pairs line {lineno}: not numeric") from None
        if not all(math.isfinite(v) for v in vals):
            raise InvalidInput(f"pairs line {lineno}: non-finite value")
        pairs.append(((vals[0], vals[1]), (vals[2], vals[3])))
    return pairs
