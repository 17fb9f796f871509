"""Group spec files, the element mini-language, and certificate rendering.

Spec files are JSON objects::

    {"field": {"Fp": 5}, "dim": 3,
     "generators": [[[4,0,0],[0,2,0],[0,0,1]], ...],
     "names": ["g1", "g2", "g3"],          (optional)
     "n_coords": [[1,3],[2,3]],            (optional, 1-based, for n(...))
     "lie_algebra": [...],                 (required over Q)
     "cap": 1000000, "label": "G5"}        (optional)

Entries are integers or ``"p/q"`` strings; floats are rejected.

Elements are products of factors joined by ``*``: a generator name with an
optional integer exponent (``g1^-2``), ``e`` or ``I`` for the identity,
``n(c1,...,cm)`` for the unipotent element with the listed entries at the
``n_coords`` positions, or a matrix literal ``[[1,0],[0,1]]``.
"""

from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction

from . import __version__
from .errors import ValidationError
from .exactalg import Field, Matrix, field_from_descriptor
from .group_ctx import DEFAULT_CAP, GroupSpec, TriangularGroup

TOOL = "powerroots"
_KNOWN_KEYS = {"field", "dim", "generators", "names", "n_coords", "lie_algebra", "cap", "label"}


# -- scalars and matrices -------------------------------------------------


def _entry(field: Field, value, where: str):
    if isinstance(value, bool) or isinstance(value, float):
        raise ValidationError(f"entry {value!r} must be an integer or a 'p/q' string", where=where)
    if not isinstance(value, (int, str)):
        raise ValidationError(f"entry {value!r} must be an integer or a 'p/q' string", where=where)
    try:
        return field.raw(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValidationError(str(exc), where=where) from None


def matrix_from_json(field: Field, data, n: int | None, where: str) -> Matrix:
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ValidationError("expected a non-empty list of rows", where=where)
    ncols = len(data[0])
    if any(len(r) != ncols for r in data):
        raise ValidationError("rows have different lengths", where=where)
    if n is not None and (len(data) != n or ncols != n):
        raise ValidationError(f"expected a {n}x{n} matrix, got {len(data)}x{ncols}", where=where)
    rows = tuple(tuple(_entry(field, v, f"{where}[{i}][{j}]") for j, v in enumerate(r))
                 for i, r in enumerate(data))
    return Matrix._raw(field, rows, ncols)


def scalar_json(field: Field, raw):
    """Integers stay integers; proper fractions become 'p/q' strings."""
    if isinstance(raw, Fraction):
        return raw.numerator if raw.denominator == 1 else f"{raw.numerator}/{raw.denominator}"
    return int(raw)


def matrix_to_json(m: Matrix) -> list:
    return [[scalar_json(m.field, x) for x in r] for r in m.raw_rows]


def matrix_to_strings(m: Matrix) -> list:
    return m.to_strings()


def scalars_to_strings(vec) -> list[str]:
    return [str(x) for x in vec]


# -- spec files -----------------------------------------------------------


def parse_spec(text: str, source: str = "<spec>") -> GroupSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return spec_from_dict(doc, source)


def spec_from_dict(doc, source: str = "<spec>") -> GroupSpec:
    if not isinstance(doc, dict):
        raise ValidationError(f"{source}: top level must be an object")
    unknown = sorted(set(doc) - _KNOWN_KEYS)
    if unknown:
        raise ValidationError(f"{source}: unknown keys {unknown}", where=unknown[0])
    for key in ("field", "dim", "generators"):
        if key not in doc:
            raise ValidationError(f"{source}: missing required key", where=key)
    try:
        field = field_from_descriptor(doc["field"])
    except (ValueError, TypeError) as exc:
        raise ValidationError(str(exc), where="field") from None
    n = doc["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError("dim must be a positive integer", where="dim")
    gens_doc = doc["generators"]
    if not isinstance(gens_doc, list):
        raise ValidationError("expected a list of matrices", where="generators")
    gens = tuple(matrix_from_json(field, g, n, f"generators[{i}]") for i, g in enumerate(gens_doc))
    names = doc.get("names")
    if names is not None:
        if not isinstance(names, list) or not all(isinstance(s, str) for s in names):
            raise ValidationError("expected a list of strings", where="names")
        names = tuple(names)
    lie = doc.get("lie_algebra")
    if lie is not None:
        if not isinstance(lie, list):
            raise ValidationError("expected a list of matrices", where="lie_algebra")
        lie = tuple(matrix_from_json(field, x, n, f"lie_algebra[{i}]") for i, x in enumerate(lie))
    coords = doc.get("n_coords")
    if coords is not None:
        if not isinstance(coords, list) or not all(
                isinstance(c, list) and len(c) == 2 and all(isinstance(t, int) for t in c) for c in coords):
            raise ValidationError("expected a list of [row, column] pairs (1-based)", where="n_coords")
        coords = tuple((i - 1, j - 1) for i, j in coords)
    cap = doc.get("cap", DEFAULT_CAP)
    if not isinstance(cap, int) or isinstance(cap, bool):
        raise ValidationError("cap must be an integer", where="cap")
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise ValidationError("label must be a string", where="label")
    return GroupSpec(field, n, gens, names=names, lie_algebra=lie, cap=cap,
                     unipotent_coords=coords, label=label)


def load_spec(path: str) -> GroupSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read spec file {path}: {exc.strerror}") from None
    return parse_spec(text, source=path)


def spec_to_dict(spec: GroupSpec) -> dict:
    doc = {
        "field": spec.field.descriptor(),
        "dim": spec.dim,
        "generators": [matrix_to_json(g) for g in spec.generators],
    }
    if spec.names:
        doc["names"] = list(spec.names)
    if spec.lie_algebra is not None:
        doc["lie_algebra"] = [matrix_to_json(x) for x in spec.lie_algebra]
    if spec.unipotent_coords is not None:
        doc["n_coords"] = [[i + 1, j + 1] for i, j in spec.unipotent_coords]
    if spec.cap != DEFAULT_CAP:
        doc["cap"] = spec.cap
    if spec.label:
        doc["label"] = spec.label
    return doc


def _scalar_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (list, dict)) for x in v)


def _render(v, level: int) -> str:
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_render(v[k], level + 1)}" for k in sorted(v)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(v, list) and v and not _scalar_list(v):
        if all(_scalar_list(x) for x in v) and len(json.dumps(v)) <= 100:
            return json.dumps(v, ensure_ascii=True)
        return "[\n" + ",\n".join(inner + _render(x, level + 1) for x in v) + "\n" + pad + "]"
    return json.dumps(v, ensure_ascii=True)


def dumps(doc) -> str:
    """Deterministic JSON: sorted keys, two-space indent, short lists inline."""
    return _render(doc, 0) + "\n"


def render_spec(spec: GroupSpec) -> str:
    return dumps(spec_to_dict(spec))


def spec_digest(spec: GroupSpec) -> str:
    return hashlib.sha256(render_spec(spec).encode()).hexdigest()


# -- elements -------------------------------------------------------------


def default_coords(n: int) -> tuple:
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


_FACTOR_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^([+-]?\d+))?$")
_RAT_TOKEN = re.compile(r"(?<![\"\w/])([+-]?\d+/[+-]?\d+)(?![\"\w/])")


def parse_element(ctx: TriangularGroup, text: str) -> Matrix:
    """Evaluate an element expression in the group context (membership is checked)."""
    src = text.strip()
    if not src:
        raise ValidationError("empty element expression", where="--element")
    out = ctx.identity
    for raw in _split_top(src.replace(" ", ""), "*"):
        out = out @ _factor(ctx, raw, text)
    ctx.require_element(out, "--element")
    return out


def _factor(ctx, tok: str, text: str) -> Matrix:
    f, n = ctx.field, ctx.n
    where = "--element"
    if not tok:
        raise ValidationError(f"empty factor in {text!r}", where=where)
    if tok.startswith("["):
        try:
            data = json.loads(_RAT_TOKEN.sub(r'"\1"', tok))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"bad matrix literal {tok!r}: {exc.msg}", where=where) from None
        return matrix_from_json(f, data, n, where)
    if tok.startswith("n(") and tok.endswith(")"):
        coords = ctx.spec.unipotent_coords or default_coords(n)
        body = tok[2:-1]
        vals = [v for v in body.split(",")] if body else []
        if len(vals) != len(coords):
            raise ValidationError(f"n(...) takes {len(coords)} entries, got {len(vals)}", where=where)
        rows = [[f.one if i == j else f.zero for j in range(n)] for i in range(n)]
        for (i, j), v in zip(coords, vals):
            rows[i][j] = _entry(f, v, where)
        return Matrix._raw(f, tuple(tuple(r) for r in rows), n)
    m = _FACTOR_RE.match(tok)
    if not m:
        raise ValidationError(f"cannot parse factor {tok!r}", where=where)
    name, exp = m.group(1), int(m.group(2)) if m.group(2) else 1
    if name in ("e", "I"):
        return ctx.identity
    if name not in ctx.names:
        raise ValidationError(f"unknown generator {name!r}; known: {', '.join(ctx.names)}", where=where)
    return ctx.generators[ctx.names.index(name)] ** exp


# -- certificates ---------------------------------------------------------


def _cls(b) -> list[str]:
    return [str(x) for x in b]


def _header(kind: str, spec: GroupSpec) -> dict:
    return {"tool": TOOL, "version": __version__, "kind": kind, "spec_sha256": spec_digest(spec)}


def certificate_to_dict(cert, ctx: TriangularGroup, element_text: str, kind: str | None = None) -> dict:
    q = ctx.quotient
    doc = _header(kind or ("coset-decision" if cert.mode == "coset" else "element-decision"), ctx.spec)
    doc["query"] = {"element": element_text, "x": matrix_to_strings(cert.x), "k": cert.k,
                    "mode": cert.mode, "series": cert.strategy}
    doc["decision"] = bool(cert.decision)
    doc["class"] = _cls(cert.a)
    doc["B"] = [_cls(b) for b in cert.B]
    if cert.mode == "coset":
        doc["B_star"] = [_cls(b) for b in cert.bstar]
    doc["layers"] = cert.layers
    doc["witness"] = _cls(cert.witness) if cert.witness is not None else None
    doc["representatives"] = [{"class": _cls(b), "matrix": matrix_to_strings(q.lift_class(b))}
                              for b in cert.B]
    doc["roots"] = [{"n": matrix_to_strings(n), "y": matrix_to_strings(y),
                     "y^k": matrix_to_strings(y ** cert.k)} for n, y in cert.roots]
    doc["obstructions"] = [{"b": _cls(ob["b"]), "layer": ob["layer"], "vector": _cls(ob["vector"]),
                            "element": matrix_to_strings(ob["element"])} for ob in cert.obstructions]
    doc["transcript"] = [_transcript_row(r) for r in cert.transcript]
    return doc


def _transcript_row(r: dict) -> dict:
    out = {}
    for key, val in r.items():
        if isinstance(val, Matrix):
            out[key] = matrix_to_strings(val)
        elif isinstance(val, tuple):
            out[key] = _cls(val)
        else:
            out[key] = val
    return out


def regularity_to_dict(report, ctx: TriangularGroup, element_text: str, strategy: str) -> dict:
    doc = _header("regularity", ctx.spec)
    doc["query"] = {"element": element_text, "x": matrix_to_strings(report.element), "k": report.k,
                    "series": strategy}
    doc["layers"] = [layer.descriptor() for layer in ctx.series(strategy)]
    doc["char_polys"] = [str(p) for p in report.char_polys]
    doc["gcds"] = [str(p) for p in report.gcds]
    doc["regular"] = report.regular
    doc["note"] = report.note
    return doc


def comparison_to_dict(report, ctx: TriangularGroup, kmax: int, strategy: str) -> dict:
    doc = _header("oracle-comparison", ctx.spec)
    doc["query"] = {"kmax": kmax, "series": strategy}
    doc["rows"] = [{"class": _cls(r.cls), "k": r.k, "criterion": r.criterion, "oracle": r.oracle,
                    "match": r.match, "image_size": r.image_size, "note": r.note} for r in report.rows]
    doc["mismatches"] = len(report.mismatches)
    return doc


def comparison_table(report, csv: bool = False) -> str:
    header = ["class", "k", "criterion", "oracle", "match", "|P_k(G)|"]
    lines = []

    def cell(v):
        return "-" if v is None else str(v).lower() if isinstance(v, bool) else str(v)

    for r in report.rows:
        cls = "(" + ",".join(str(x) for x in r.cls) + ")"
        if r.note:
            lines.append([cls, str(r.k), "-", "-", "skip", r.note])
        else:
            lines.append([cls, str(r.k), cell(r.criterion), cell(r.oracle), "ok" if r.match else "MISMATCH",
                          str(r.image_size)])
    if csv:
        return "\n".join(",".join(f'"{c}"' if "," in c else c for c in row) for row in [header] + lines) + "\n"
    widths = [max(len(row[i]) for row in [header] + lines) for i in range(len(header))]
    fmt = lambda row: "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()  # noqa: E731
    return "\n".join([fmt(header)] + [fmt(r) for r in lines]) + "\n"
