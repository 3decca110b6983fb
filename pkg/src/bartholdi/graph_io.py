"""Reading graphs and rationals from the command line."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .corpus import BUILTIN_NAMES, builtin
from .errors import BadRational, ParseError
from .graph_core import Digraph, build_digraph

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> int | Fraction:
    """Parse "p/q" or an integer; decimals are rejected on purpose."""
    m = _RATIONAL.match(text)
    if not m:
        raise BadRational(f"not an exact rational: {text!r} (use p/q or an integer)")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise BadRational(f"zero denominator in {text!r}")
    v = Fraction(num, den)
    return v.numerator if v.denominator == 1 else v


def looks_rational(text: str) -> bool:
    return bool(_RATIONAL.match(text))


def parse_edge_list(text: str, name: str = "") -> Digraph:
    """Lines "a b" with 0-based vertex ids; "#" starts a comment."""
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two vertex ids, got {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"vertex ids must be integers: {line!r}", lineno) from None
        if a < 0 or b < 0:
            raise ParseError(f"negative vertex id in {line!r}", lineno)
        edges.append((a, b))
    if not edges:
        raise ParseError("no edges found")
    n = max(max(e) for e in edges) + 1
    return build_digraph(n, edges, name=name)


def parse_document(text: str, name: str = "") -> Digraph:
    """{"n_vertices": int, "edges": [[a, b], ...]}"""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or "n_vertices" not in doc or "edges" not in doc:
        raise ParseError('document needs "n_vertices" and "edges"')
    n = doc["n_vertices"]
    edges = doc["edges"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError('"n_vertices" must be an integer')
    if not isinstance(edges, list):
        raise ParseError('"edges" must be a list')
    for k, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
            raise ParseError(f"edge #{k} is not a pair of integers: {e!r}")
    return build_digraph(n, edges, name=doc.get("name", name))


def load_graph(spec: str) -> Digraph:
    """Resolve "builtin:<name>" or read a file in either supported format."""
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name not in BUILTIN_NAMES:
            raise ParseError(f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
        return builtin(name)
    path = Path(spec)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {spec}: {exc.strerror}") from None
    if text.lstrip().startswith("{"):
        return parse_document(text, name=path.stem)
    return parse_edge_list(text, name=path.stem)
