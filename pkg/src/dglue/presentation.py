"""The ``.dg`` presentation file: a JSON tree naming pieces, gluing, bundles and the checks to run.

Expressions are strings in the ``expr`` text grammar. Everything is
validated at load time, so a :class:`Presentation` always holds a
consistent object graph. A minimal file::

    {
      "schema_version": 1,
      "pieces": {"X1": {}, "X2": {}},
      "gluing": {"first": "X1", "second": "X2", "points": [[0, 0]]},
      "bundles": {"V1": {"base": "X1", "rank": 1}, "V2": {"base": "X2", "rank": 1}},
      "fibre_map": {"points": {"0": [[1]]}}
    }

An interval locus is written ``"interval": {"a": -1, "b": 1, "f": "x^3 + x"}``
with ``"fibre_map": {"matrix": [["exp(x)"]]}``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import connections as C
from . import expr as E
from .bundles import (FibreDescriptor, FiniteFibreMap, GluedBundle, IntervalFibreMap,
                      RoughGenerator, TrivialPseudoBundle, glue_bundles)
from .errors import DGlueError, DomainError, ParseError, ValidationError
from .gluing import FinitePoints, GluedFunction, GluedSpace, Interval, Piece, glue_functions
from .sections import Section

SCHEMA_VERSION = 1
CHECK_KINDS = ("sections_compatible", "invariant", "metrics_compatible", "connections_compatible",
               "metric_compatible", "leibniz", "induced_metric_compatible", "glued_leibniz",
               "reduced_round_trip")


@dataclass
class Presentation:
    source: str
    pieces: dict[str, Piece]
    space: GluedSpace
    bundles: dict[str, TrivialPseudoBundle]
    glued: GluedBundle
    metrics: dict[str, C.PseudoMetric] = field(default_factory=dict)
    connections: dict[str, C.Connection] = field(default_factory=dict)
    sections: dict[str, Section] = field(default_factory=dict)
    functions: dict[str, tuple[str, E.SmoothExpr]] = field(default_factory=dict)
    complements: dict = field(default_factory=dict)
    checks: list[dict] = field(default_factory=list)
    induce: dict = field(default_factory=dict)

    def glued_function(self, first: str, second: str) -> GluedFunction:
        return glue_functions(self.functions[first][1], self.functions[second][1], self.space)


class _Loader:
    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source
        self.lines = text.splitlines()

    def line_of(self, key: str) -> int | None:
        pat = re.compile(r'"' + re.escape(str(key)) + r'"')
        for i, ln in enumerate(self.lines, 1):
            if pat.search(ln):
                return i
        return None

    def fail(self, msg: str, path: str, key=None) -> ParseError:
        last = key if key is not None else path.rsplit(".", 1)[-1]
        return ParseError(msg, line=self.line_of(last), field=path)

    def get(self, obj: dict, key: str, path: str, kind=None, required=True, default=None):
        if not isinstance(obj, dict):
            raise self.fail("expected an object", path)
        if key not in obj:
            if required:
                raise self.fail(f"missing field {key!r}", f"{path}.{key}" if path else key, key)
            return default
        value = obj[key]
        if kind is not None and not isinstance(value, kind):
            name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
            raise self.fail(f"expected {name}", f"{path}.{key}" if path else key, key)
        return value

    def expr(self, text, path: str) -> E.SmoothExpr:
        if isinstance(text, (int, float)) and not isinstance(text, bool):
            return E.const(float(text))
        if not isinstance(text, str):
            raise self.fail("expected an expression string", path)
        try:
            return E.parse(text)
        except ParseError as exc:
            raise ParseError(str(exc), line=self.line_of(path.rsplit(".", 1)[-1]), field=path) from None

    def number(self, v, path: str) -> float:
        if isinstance(v, bool) or not isinstance(v, (int, float, str)):
            raise self.fail("expected a number", path)
        try:
            return float(v)
        except ValueError:
            raise self.fail(f"not a number: {v!r}", path) from None

    def ref(self, table: dict, name, path: str, what: str):
        if name not in table:
            raise ValidationError(f"{path} refers to unknown {what} {name!r}", invariant="referential integrity")
        return table[name]


def _domain_guard(e: E.SmoothExpr, piece: Piece, path: str) -> None:
    try:
        E.check_nonvanishing(e, piece.samples(257), C.POSITIVITY_MARGIN)
    except DomainError as exc:
        raise ValidationError(f"{path}: {exc}", invariant="division-domain") from None


def _invariant(name: str, call):
    try:
        return call()
    except ValidationError:
        raise
    except (DGlueError, ValueError, ArithmeticError) as exc:
        law = getattr(exc, "law", name)
        raise ValidationError(str(exc), invariant=law if law != "dglue" else name) from None


def loads(text: str, source: str = "<string>") -> Presentation:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    L = _Loader(text, source)
    if not isinstance(raw, dict):
        raise ParseError("top level must be an object", line=1)
    version = L.get(raw, "schema_version", "", int)
    if version != SCHEMA_VERSION:
        raise L.fail(f"unsupported schema_version {version}", "schema_version")

    pieces = {}
    for name, entry in L.get(raw, "pieces", "", dict).items():
        path = f"pieces.{name}"
        dim = L.get(entry, "dim", path, int, required=False, default=1)
        window = L.get(entry, "window", path, list, required=False, default=[-10.0, 10.0])
        if len(window) != 2:
            raise L.fail("window needs two numbers", f"{path}.window")
        pieces[name] = _invariant("piece", lambda: Piece(name, dim, tuple(L.number(w, f"{path}.window")
                                                                          for w in window)))

    gl = L.get(raw, "gluing", "", dict)
    x1 = L.ref(pieces, L.get(gl, "first", "gluing", str), "gluing.first", "piece")
    x2 = L.ref(pieces, L.get(gl, "second", "gluing", str), "gluing.second", "piece")
    if "points" in gl and "interval" in gl:
        raise ValidationError("gluing has both points and an interval", invariant="make_glued_space")
    if "points" in gl:
        pts = L.get(gl, "points", "gluing", list)
        if not pts:
            raise ValidationError("gluing locus is empty", invariant="make_glued_space")
        pairs = []
        for i, pair in enumerate(pts):
            if not isinstance(pair, list) or len(pair) != 2:
                raise L.fail("each locus point is a pair [y, f(y)]", f"gluing.points[{i}]", "points")
            pairs.append((L.number(pair[0], "gluing.points"), L.number(pair[1], "gluing.points")))
        locus = _invariant("make_glued_space", lambda: FinitePoints(tuple(pairs)))
    elif "interval" in gl:
        iv = L.get(gl, "interval", "gluing", dict)
        a = L.number(L.get(iv, "a", "gluing.interval"), "gluing.interval.a")
        b = L.number(L.get(iv, "b", "gluing.interval"), "gluing.interval.b")
        f = L.expr(L.get(iv, "f", "gluing.interval", required=False, default="x"), "gluing.interval.f")
        locus = _invariant("make_glued_space", lambda: Interval(a, b, f))
    else:
        raise ValidationError("gluing locus is empty", invariant="make_glued_space")
    space = _invariant("make_glued_space", lambda: GluedSpace(x1, x2, locus))

    bundles = {}
    for name, entry in L.get(raw, "bundles", "", dict).items():
        path = f"bundles.{name}"
        base = L.ref(pieces, L.get(entry, "base", path, str), f"{path}.base", "piece")
        rank = L.get(entry, "rank", path, int)
        rough = []
        for r in L.get(entry, "rough", path, list, required=False, default=[]):
            direction = [L.number(d, f"{path}.rough") for d in L.get(r, "direction", f"{path}.rough", list)]
            profile = L.expr(r.get("profile", "abs(x)"), f"{path}.rough.profile")
            rough.append(_invariant("rough_generator", lambda: RoughGenerator(tuple(direction), profile)))
        bundles[name] = _invariant("pseudo_bundle",
                                   lambda: TrivialPseudoBundle(name, base, FibreDescriptor(rank, tuple(rough))))

    fm = L.get(raw, "fibre_map", "", dict)
    v1 = L.ref(bundles, L.get(fm, "first", "fibre_map", str, required=False, default="V1"),
               "fibre_map.first", "bundle")
    v2 = L.ref(bundles, L.get(fm, "second", "fibre_map", str, required=False, default="V2"),
               "fibre_map.second", "bundle")
    if "points" in fm:
        mats = {}
        for key, m in L.get(fm, "points", "fibre_map", dict).items():
            arr = np.asarray(m, dtype=np.float64) if isinstance(m, list) else None
            if arr is None or arr.ndim != 2:
                raise L.fail("expected a matrix", f"fibre_map.points.{key}", key)
            mats[L.number(key, "fibre_map.points")] = arr
        fmap = FiniteFibreMap(mats)
    else:
        rows = L.get(fm, "matrix", "fibre_map", list)
        fmap = IntervalFibreMap(tuple(tuple(L.expr(e, "fibre_map.matrix") for e in row) for row in rows))
    glued = _invariant("glue_bundles", lambda: glue_bundles(v1, v2, space, fmap))

    pres = Presentation(source, pieces, space, bundles, glued)

    for name, entry in raw.get("functions", {}).items():
        path = f"functions.{name}"
        piece = L.get(entry, "piece", path, str)
        L.ref(pieces, piece, f"{path}.piece", "piece")
        e = L.expr(L.get(entry, "expr", path), f"{path}.expr")
        _domain_guard(e, pieces[piece], path)
        pres.functions[name] = (piece, e)

    for name, entry in raw.get("metrics", {}).items():
        path = f"metrics.{name}"
        b = L.ref(bundles, L.get(entry, "bundle", path, str), f"{path}.bundle", "bundle")
        mat = tuple(tuple(L.expr(e, f"{path}.matrix") for e in row)
                    for row in L.get(entry, "matrix", path, list))
        for row in mat:
            for e in row:
                _domain_guard(e, b.base, path)
        pres.metrics[name] = _invariant("pseudo_metric", lambda: C.PseudoMetric(b, mat))

    for name, entry in raw.get("connections", {}).items():
        path = f"connections.{name}"
        b = L.ref(bundles, L.get(entry, "bundle", path, str), f"{path}.bundle", "bundle")
        if "levi_civita" in entry:
            g = L.ref(pres.metrics, entry["levi_civita"], f"{path}.levi_civita", "metric")
            if b.rank != 1 or g.bundle != b:
                raise ValidationError(f"{path}: Levi-Civita needs a rank-1 metric on {b.name}",
                                      invariant="levi_civita_1d")
            pres.connections[name] = _invariant("levi_civita_1d", lambda: C.levi_civita_1d(g.matrix[0][0], b))
        else:
            gamma = tuple(tuple(L.expr(e, f"{path}.gamma") for e in row)
                          for row in L.get(entry, "gamma", path, list))
            for row in gamma:
                for e in row:
                    _domain_guard(e, b.base, path)
            pres.connections[name] = _invariant("connection", lambda: C.Connection(b, gamma))

    for name, entry in raw.get("sections", {}).items():
        path = f"sections.{name}"
        b = L.ref(bundles, L.get(entry, "bundle", path, str), f"{path}.bundle", "bundle")
        comps = tuple(L.expr(e, f"{path}.components") for e in L.get(entry, "components", path, list))
        pins = {L.number(k, f"{path}.pins"): tuple(L.number(v, f"{path}.pins") for v in vec)
                for k, vec in L.get(entry, "pins", path, dict, required=False, default={}).items()}
        for e in comps:
            _domain_guard(e, b.base, path)
        pres.sections[name] = _invariant("section", lambda: Section(b, comps, pins))

    pres.complements = parse_complements(
        [f"{k}={','.join(str(v) for v in vec)}"
         for k, vecs in raw.get("complements", {}).items()
         for vec in (vecs if vecs and isinstance(vecs[0], list) else [vecs])])

    tables = {"section": pres.sections, "metric": pres.metrics, "connection": pres.connections,
              "function": pres.functions}
    for i, chk in enumerate(raw.get("checks", [])):
        path = f"checks[{i}]"
        kind = L.get(chk, "kind", path, str)
        if kind not in CHECK_KINDS:
            raise L.fail(f"unknown check kind {kind!r}", f"{path}.kind", "kind")
        for key, value in chk.items():
            what = key.rstrip("0123456789_").removesuffix("s")
            if what in tables:
                for v in value if isinstance(value, list) else [value]:
                    for item in v if isinstance(v, list) else [v]:
                        L.ref(tables[what], item, f"{path}.{key}", what)
        pres.checks.append(dict(chk, name=chk.get("name", f"{kind}#{i}")))

    if "induce" in raw:
        ind = L.get(raw, "induce", "", dict)
        for key, what in (("connections", "connection"), ("metrics", "metric"), ("sections", "section")):
            for item in ind.get(key, []):
                for v in item if isinstance(item, list) else [item]:
                    L.ref(tables[what], v, f"induce.{key}", what)
        pres.induce = ind
    return pres


def parse_presentation(path) -> Presentation:
    p = Path(path)
    if not p.is_file():
        raise ParseError(f"no such file: {path}")
    return loads(p.read_text(encoding="utf-8"), str(p))


def parse_complements(items) -> dict:
    """``["0=1,1", "*=0,1"]`` → ``{0.0: [[1, 1]], "*": [[0, 1]]}``; repeated keys add vectors."""
    out: dict = {}
    for item in items:
        key, sep, vec = item.partition("=")
        if not sep:
            raise ParseError(f"complement {item!r} is not <locus-point>=<vector>", field="complement")
        key = key.strip()
        try:
            k = "*" if key == "*" else float(key)
            v = [float(t) for t in vec.split(",")]
        except ValueError:
            raise ParseError(f"cannot read complement {item!r}", field="complement") from None
        if not all(math.isfinite(t) for t in v):
            raise ParseError(f"complement {item!r} is not finite", field="complement")
        out.setdefault(k, []).append(v)
    return out


def data_path(name: str) -> Path:
    return Path(__file__).with_name("data") / name
