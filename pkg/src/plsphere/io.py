"""Plain-text complex files and command reports.

A complex file is line oriented; ``#`` starts a comment::

    dim 3
    vertex 0            # optionally followed by coordinates
    vertex 1 0.0 1.0 0.5
    cell 0 1 2 3
    subset S : 1 2 3; 1 2 4; 1 3 4; 2 3 4
    sequence W : 0 1 5 3; 0 1 2 5 3; 0 1 2

``subset`` lists cells of the complex, ``sequence`` lists closed curves as
cyclic vertex lists. Every vertex used must be declared.
"""

from __future__ import annotations

import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .complex import Complex, build_from_maximal_cells, make_cell
from .errors import (
    DuplicateVertexInCell,
    IoError,
    ParseError,
    SubsetCellNotInComplex,
    UnknownVertex,
)


@dataclass
class ComplexFile:
    complex: Complex
    dim: int | None
    subsets: dict = field(default_factory=dict)  # name -> frozenset of cells
    sequences: dict = field(default_factory=dict)  # name -> tuple of vertex cycles
    digest: str = ""


def _tokens(line: str):
    """(column, token) pairs, columns 1-based; stops at a comment."""
    out, i = [], 0
    while i < len(line):
        ch = line[i]
        if ch == "#":
            break
        if ch.isspace():
            i += 1
            continue
        if ch in ":;":
            out.append((i + 1, ch))
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace() and line[j] not in ":;#":
            j += 1
        out.append((i + 1, line[i:j]))
        i = j
    return out


def _int(tok, lineno):
    col, text = tok
    try:
        v = int(text)
    except ValueError:
        raise ParseError(f"expected a vertex id, got {text!r}", lineno, col) from None
    if v < 0:
        raise ParseError(f"negative vertex id {v}", lineno, col)
    return v


def _groups(toks, lineno):
    """Split ``a b c ; d e f`` into integer groups."""
    groups, cur = [], []
    for tok in toks:
        if tok[1] == ";":
            if not cur:
                raise ParseError("empty entry", lineno, tok[0])
            groups.append(cur)
            cur = []
        else:
            cur.append((tok, _int(tok, lineno)))
    if cur:
        groups.append(cur)
    if not groups:
        raise ParseError("no entries", lineno, toks[0][0] if toks else 1)
    return groups


def parse_complex(text: str) -> ComplexFile:
    dim = None
    vertices = {}
    cells = []
    raw_subsets, raw_sequences = {}, {}
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = _tokens(line)
        if not toks:
            continue
        col, kw = toks[0]
        rest = toks[1:]
        if kw == "dim":
            if len(rest) != 1:
                raise ParseError("dim takes one integer", lineno, col)
            dim = _int(rest[0], lineno)
        elif kw == "vertex":
            if not rest:
                raise ParseError("vertex needs an id", lineno, col)
            v = _int(rest[0], lineno)
            if v in vertices:
                raise ParseError(f"vertex {v} declared twice", lineno, rest[0][0])
            xs = []
            for c, t in rest[1:]:
                try:
                    xs.append(float(t))
                except ValueError:
                    raise ParseError(f"bad coordinate {t!r}", lineno, c) from None
            vertices[v] = tuple(xs)
        elif kw == "cell":
            if not rest:
                raise ParseError("cell needs vertices", lineno, col)
            cells.append((lineno, [(tok, _int(tok, lineno)) for tok in rest]))
        elif kw in ("subset", "sequence"):
            if len(rest) < 3 or rest[1][1] != ":":
                # point at the token standing where the colon should be
                where = rest[1][0] if len(rest) > 1 else (rest[0][0] if rest else col)
                raise ParseError(f"expected '{kw} <name> : ...'", lineno, where)
            name = rest[0][1]
            target = raw_subsets if kw == "subset" else raw_sequences
            if name in raw_subsets or name in raw_sequences:
                raise ParseError(f"name {name!r} used twice", lineno, rest[0][0])
            target[name] = (lineno, _groups(rest[2:], lineno))
        else:
            raise ParseError(f"unknown record {kw!r}", lineno, col)

    def resolve(lineno, group):
        for (c, _), v in group:
            if v not in vertices:
                raise UnknownVertex(f"line {lineno}, column {c}: vertex {v} is not declared")
        try:
            return make_cell(v for _, v in group)
        except DuplicateVertexInCell as exc:
            raise ParseError(str(exc), lineno, group[0][0][0]) from None

    if not cells:
        raise ParseError("no cell records", 1, 1)
    maximal = [resolve(lineno, g) for lineno, g in cells]
    with_coords = {v for v, x in vertices.items() if x}
    coords = {v: vertices[v] for v in with_coords} if with_coords else None
    K = build_from_maximal_cells(maximal, coords)

    subsets = {}
    for name, (lineno, groups) in raw_subsets.items():
        cs = []
        for g in groups:
            c = resolve(lineno, g)
            if c not in K:
                raise SubsetCellNotInComplex(f"line {lineno}: subset {name} cell {c} is not in the complex")
            cs.append(c)
        subsets[name] = frozenset(cs)
    sequences = {}
    for name, (lineno, groups) in raw_sequences.items():
        cycles = []
        for g in groups:
            resolve(lineno, g)
            vs = tuple(v for _, v in g)
            for a, b in zip(vs, vs[1:] + vs[:1]):
                if make_cell((a, b)) not in K:
                    raise SubsetCellNotInComplex(f"line {lineno}: sequence {name} edge {a} {b} is not in the complex")
            cycles.append(vs)
        sequences[name] = tuple(cycles)
    return ComplexFile(K, dim, subsets, sequences)


def load_complex(path) -> tuple[Complex, dict]:
    """The complex in ``path`` and its named subsets (sequences included)."""
    f = read_complex_file(path)
    named = dict(f.subsets)
    named.update(f.sequences)
    return f.complex, named


def read_complex_file(path) -> ComplexFile:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror}") from None
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("file is not UTF-8 text", 1, exc.start + 1) from None
    f = parse_complex(text)
    f.digest = hashlib.sha256(data).hexdigest()
    return f


def _fmt_num(x: float) -> str:
    return repr(float(x))


def dump_complex(K: Complex, subsets=None, sequences=None, dim=None) -> str:
    lines = [f"dim {K.top_dim if dim is None else dim}"]
    for v in K.vertices:
        if K.coords is not None:
            lines.append(f"vertex {v} " + " ".join(_fmt_num(x) for x in K.coords[v]))
        else:
            lines.append(f"vertex {v}")
    for c in K.maximal_cells:
        lines.append("cell " + " ".join(map(str, c)))
    for name in sorted(subsets or {}):
        body = "; ".join(" ".join(map(str, c)) for c in sorted(subsets[name]))
        lines.append(f"subset {name} : {body}")
    for name in sorted(sequences or {}):
        body = "; ".join(" ".join(map(str, cyc)) for cyc in sequences[name])
        lines.append(f"sequence {name} : {body}")
    return "\n".join(lines) + "\n"


def write_complex(path, K: Complex, subsets=None, sequences=None):
    try:
        Path(path).write_text(dump_complex(K, subsets, sequences))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror}") from None


# -- reports ----------------------------------------------------------------

@dataclass
class Report:
    command: list
    input_digest: str
    outcome: str
    payload: dict
    timing: float | None = None


def _plain(x):
    """JSON-safe copy: tuples to lists, infinities to strings, sorted sets."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return [_plain(v) for v in sorted(x)]
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if hasattr(x, "value") and isinstance(x.value, str):
        return x.value
    return x


def _flatten(prefix, x, out):
    if isinstance(x, dict) and x:
        for k in sorted(x):
            _flatten(f"{prefix}.{k}" if prefix else str(k), x[k], out)
    else:
        out.append(f"{prefix}: {json.dumps(x) if isinstance(x, (list, dict)) else x}")


def render_report(r: Report, fmt: str = "text") -> str:
    """Text for people, or canonical JSON (timing left out so reruns match byte for byte)."""
    body = {"command": list(r.command), "input_digest": r.input_digest,
            "outcome": r.outcome, "payload": _plain(r.payload)}
    if fmt == "structured":
        return json.dumps(body, sort_keys=True, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = [f"command: {' '.join(map(str, r.command))}",
             f"input_digest: {r.input_digest}",
             f"outcome: {r.outcome}"]
    if body["payload"]:
        _flatten("", body["payload"], lines)
    if r.timing is not None:
        lines.append(f"elapsed_seconds: {r.timing:.3f}")
    return "\n".join(lines) + "\n"


def emit_report(r: Report, fmt: str = "text", stream=None):
    stream = sys.stdout if stream is None else stream
    try:
        stream.write(render_report(r, fmt))
        stream.flush()
    except OSError as exc:
        raise IoError(f"cannot write report: {exc}") from None
