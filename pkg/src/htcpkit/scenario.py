"""Line-oriented scenario files.

A scenario is split into ``[section]`` blocks; ``#`` starts a comment::

    [field]       QQ | GF(p)
    [backend]     modules | complexes window=-7..7
    [quiver]      vertices 1 2 / arrow a 1 2 / relation a.b - c.d
    [objects]     name = thin 1 2 : a | rep dims=1:1,2:1 a=[[1]] | <expr>
                  universe = n1, n2 ... | universe = shifts P1=P(1) S1=S(1) over -3..3
                  generators = (same forms, defaults to the universe)
    [subcat]      S = add(x, y) | perp1(S) | lperp1(V) | inj(N) | serre(idempotent=1,2)
                  | homology(<=-1) | meet(A, B) | all | zero
    [pair]        P = ghtcp S T U V | recollement idempotent=1,2,3 S V
                  | heart S V K0=K projective=P(1),P(2)
    [pipeline]    step args... [as id]
    [expect]      id.path = value | id.path >= value | id.path <= value

Object expressions: ``P(v)``, ``I(v)``, ``S(v)``, defined names, ``+`` for
direct sums and a trailing ``[n]`` for shifts (complexes only).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dfield

from .addcat import Universe
from .exactlin import QQ, Field

SECTIONS = ("field", "backend", "quiver", "objects", "subcat", "pair", "pipeline", "expect")


class ScenarioError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


@dataclass
class Line:
    no: int
    text: str


@dataclass
class Scenario:
    name: str = "scenario"
    field: Field = QQ
    field_spec: str = "QQ"
    backend: str = "modules"
    window: tuple = (-4, 4)
    vertices: list = dfield(default_factory=list)
    arrows: list = dfield(default_factory=list)
    relations: list = dfield(default_factory=list)
    objects: list = dfield(default_factory=list)       # (name, spec, line)
    universe: tuple | None = None                     # (kind, data, line)
    generators: tuple | None = None
    subcats: list = dfield(default_factory=list)       # (name, spec, line)
    pairs: list = dfield(default_factory=list)         # (name, kind, args, line)
    pipeline: list = dfield(default_factory=list)      # (id, step, args, line)
    expects: list = dfield(default_factory=list)       # (path, op, value, line)


_NAME = r"[^\s=+\[\](),]+"


def _split_sections(text: str) -> dict[str, list[Line]]:
    out: dict[str, list[Line]] = {}
    cur = None
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        m = re.fullmatch(r"\[(\w+)\]", s)
        if m:
            cur = m.group(1)
            if cur not in SECTIONS:
                raise ScenarioError(f"unknown section [{cur}]", no)
            if cur in out:
                raise ScenarioError(f"duplicate section [{cur}]", no)
            out[cur] = []
            continue
        if cur is None:
            raise ScenarioError("text before the first section", no)
        out[cur].append(Line(no, s))
    return out


def _parse_value(s: str, no: int):
    s = s.strip()
    low = s.lower()
    if low in ("true", "false"):
        return low == "true"
    if low in ("null", "none"):
        return None
    try:
        return json.loads(s)
    except json.JSONDecodeError:
        return s


def _kv(tokens: list[str]) -> tuple[list[str], dict]:
    pos, kw = [], {}
    for t in tokens:
        if "=" in t:
            k, v = t.split("=", 1)
            kw[k] = v
        else:
            pos.append(t)
    return pos, kw


def _range(s: str, no: int) -> tuple[int, int]:
    m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", s)
    if not m:
        raise ScenarioError(f"expected a range lo..hi, got {s!r}", no)
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise ScenarioError("empty range", no)
    return lo, hi


def parse_field(spec: str, no: int | None = None) -> Field:
    spec = spec.strip()
    if spec in ("QQ", "Q"):
        return QQ
    m = re.fullmatch(r"GF\((\d+)\)", spec)
    if not m:
        raise ScenarioError(f"unknown field {spec!r}", no)
    p = int(m.group(1))
    try:
        return Field(p)
    except ValueError as e:
        raise ScenarioError(str(e), no) from None


def _universe_spec(rhs: str, no: int):
    rhs = rhs.strip()
    if rhs.startswith("shifts"):
        m = re.fullmatch(r"shifts\s+(.*)\s+over\s+(\S+)", rhs)
        if not m:
            raise ScenarioError("expected: shifts NAME=EXPR ... over lo..hi", no)
        items = []
        for tok in m.group(1).split():
            if "=" not in tok:
                raise ScenarioError(f"shift item {tok!r} needs a label: LABEL=EXPR", no)
            items.append(tuple(tok.split("=", 1)))
        return ("shifts", (items, _range(m.group(2), no)), no)
    names = [n.strip() for n in rhs.split(",") if n.strip()]
    if not names:
        raise ScenarioError("empty universe", no)
    return ("names", names, no)


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    secs = _split_sections(text)
    sc = Scenario(name=name)
    if "field" in secs:
        lines = secs["field"]
        if len(lines) != 1:
            raise ScenarioError("[field] takes exactly one line", lines[0].no if lines else None)
        sc.field_spec = lines[0].text
        sc.field = parse_field(lines[0].text, lines[0].no)
    for ln in secs.get("backend", []):
        toks = ln.text.split()
        pos, kw = _kv(toks)
        if pos[:1] not in (["modules"], ["complexes"]):
            raise ScenarioError(f"unknown backend {ln.text!r}", ln.no)
        sc.backend = pos[0]
        if "window" in kw:
            sc.window = _range(kw["window"], ln.no)
    if "quiver" not in secs:
        raise ScenarioError("missing [quiver] section")
    for ln in secs["quiver"]:
        head, _, rest = ln.text.partition(" ")
        if head == "vertices":
            sc.vertices = rest.split()
        elif head == "arrow":
            parts = rest.split()
            if len(parts) != 3:
                raise ScenarioError("expected: arrow NAME SOURCE TARGET", ln.no)
            sc.arrows.append(tuple(parts))
        elif head == "relation":
            sc.relations.append((rest.strip(), ln.no))
        else:
            raise ScenarioError(f"unknown quiver directive {head!r}", ln.no)
    if not sc.vertices:
        raise ScenarioError("quiver has no vertices")
    for ln in secs.get("objects", []):
        lhs, eq, rhs = ln.text.partition("=")
        if not eq:
            raise ScenarioError("expected NAME = definition", ln.no)
        lhs = lhs.strip()
        if lhs == "universe":
            sc.universe = _universe_spec(rhs, ln.no)
        elif lhs == "generators":
            sc.generators = _universe_spec(rhs, ln.no)
        else:
            if not re.fullmatch(_NAME, lhs):
                raise ScenarioError(f"bad object name {lhs!r}", ln.no)
            sc.objects.append((lhs, rhs.strip(), ln.no))
    for ln in secs.get("subcat", []):
        lhs, eq, rhs = ln.text.partition("=")
        if not eq:
            raise ScenarioError("expected NAME = definition", ln.no)
        sc.subcats.append((lhs.strip(), rhs.strip(), ln.no))
    for ln in secs.get("pair", []):
        lhs, eq, rhs = ln.text.partition("=")
        if not eq:
            raise ScenarioError("expected NAME = kind args", ln.no)
        toks = rhs.split()
        if not toks or toks[0] not in ("ghtcp", "recollement", "heart"):
            raise ScenarioError(f"unknown pair kind in {rhs.strip()!r}", ln.no)
        sc.pairs.append((lhs.strip(), toks[0], toks[1:], ln.no))
    seen_ids = set()
    for ln in secs.get("pipeline", []):
        toks = ln.text.split()
        sid = None
        if len(toks) >= 3 and toks[-2] == "as":
            sid = toks[-1]
            toks = toks[:-2]
        sid = sid or toks[0]
        if sid in seen_ids:
            raise ScenarioError(f"duplicate step id {sid!r}; use 'as ID'", ln.no)
        seen_ids.add(sid)
        sc.pipeline.append((sid, toks[0], toks[1:], ln.no))
    for ln in secs.get("expect", []):
        m = re.fullmatch(r"(\S+)\s*(>=|<=|==|=)\s*(.+)", ln.text)
        if not m:
            raise ScenarioError("expected PATH = VALUE", ln.no)
        path, op, val = m.groups()
        if path.split(".", 1)[0] not in seen_ids:
            raise ScenarioError(f"expectation references undefined step {path.split('.', 1)[0]!r}", ln.no)
        sc.expects.append((path, "=" if op == "==" else op, _parse_value(val, ln.no), ln.no))
    _check_references(sc)
    return sc


def _check_references(sc: Scenario) -> None:
    """Every name is defined before use (objects, subcategories, pairs)."""
    objs = set()
    for name, spec, no in sc.objects:
        for ref in _expr_names(spec) if not spec.startswith(("thin", "rep ")) else []:
            if ref not in objs:
                raise ScenarioError(f"undefined object {ref!r}", no)
        objs.add(name)
    for u in (sc.universe, sc.generators):
        if u is None:
            continue
        kind, data, no = u
        refs = data if kind == "names" else [r for _, e in data[0] for r in _expr_names(e)]
        for r in refs:
            if kind == "names" and r not in objs:
                raise ScenarioError(f"undefined object {r!r}", no)
            if kind == "shifts" and r not in objs:
                raise ScenarioError(f"undefined object {r!r}", no)
    subs = set()
    for name, spec, no in sc.subcats:
        m = re.fullmatch(r"(\w+)\((.*)\)", spec)
        if m and m.group(1) in ("perp1", "lperp1", "inj"):
            ref = m.group(2).strip()
            if ref not in subs:
                raise ScenarioError(f"undefined subcategory {ref!r}", no)
        elif m and m.group(1) == "meet":
            for ref in (r.strip() for r in m.group(2).split(",")):
                if ref not in subs:
                    raise ScenarioError(f"undefined subcategory {ref!r}", no)
        elif m and m.group(1) == "add":
            for part in _split_args(m.group(2)):
                for ref in _expr_names(part):
                    if ref not in objs:
                        raise ScenarioError(f"undefined object {ref!r}", no)
        elif not m and spec not in ("all", "zero"):
            raise ScenarioError(f"unknown subcategory definition {spec!r}", no)
        subs.add(name)
    pairs = set()
    for name, kind, args, no in sc.pairs:
        pos, kw = _kv(args)
        for ref in pos + ([kw["K0"]] if "K0" in kw else []):
            if ref not in subs:
                raise ScenarioError(f"undefined subcategory {ref!r}", no)
        want = {"ghtcp": 4, "recollement": 2, "heart": 2}[kind]
        if len(pos) != want:
            raise ScenarioError(f"{kind} expects {want} subcategories", no)
        if "projective" in kw:
            for part in kw["projective"].split(","):
                for ref in _expr_names(part):
                    if ref not in objs:
                        raise ScenarioError(f"undefined object {ref!r}", no)
        pairs.add(name)
    sc._pair_names = pairs  # type: ignore[attr-defined]


def _split_args(s: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


_TOKEN = re.compile(r"\s*(?:(?P<gen>[PIS])\((?P<v>[^)]+)\)|(?P<name>" + _NAME + r")|(?P<plus>\+)|\[(?P<shift>-?\d+)\])")


def _tokenize(expr: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    expr = expr.strip()
    while pos < len(expr):
        m = _TOKEN.match(expr, pos)
        if not m or m.end() == pos:
            raise ScenarioError(f"cannot parse object expression {expr!r} at {pos}")
        if m.group("gen"):
            out.append(("gen", f"{m.group('gen')}:{m.group('v').strip()}"))
        elif m.group("name"):
            out.append(("name", m.group("name")))
        elif m.group("plus"):
            out.append(("plus", "+"))
        else:
            out.append(("shift", m.group("shift")))
        pos = m.end()
    return out


def _expr_names(expr: str) -> list[str]:
    return [v for k, v in _tokenize(expr) if k == "name"]


def eval_expr(expr: str, build_gen, lookup, shift, direct_sum):
    """Evaluate ``term (+ term)*`` where ``term = atom [n]*``."""
    terms, cur = [], None
    for kind, val in _tokenize(expr):
        if kind in ("gen", "name"):
            if cur is not None:
                raise ScenarioError(f"missing '+' in {expr!r}")
            cur = build_gen(*val.split(":", 1)) if kind == "gen" else lookup(val)
        elif kind == "shift":
            if cur is None:
                raise ScenarioError(f"shift without an object in {expr!r}")
            cur = shift(cur, int(val))
        else:
            if cur is None:
                raise ScenarioError(f"dangling '+' in {expr!r}")
            terms.append(cur)
            cur = None
    if cur is None:
        raise ScenarioError(f"empty or dangling expression {expr!r}")
    terms.append(cur)
    return terms[0] if len(terms) == 1 else direct_sum(terms)


def build_universe(cat, spec, objects: dict, evaluate) -> Universe:
    kind, data, no = spec
    if kind == "names":
        return Universe(cat, [(n, objects[n]) for n in data])
    items, (lo, hi) = data
    out = []
    for n in range(lo, hi + 1):
        for label, e in items:
            out.append((f"{label}[{n}]", cat.shift(evaluate(e), n)))
    return Universe(cat, out)


def parse_rep_spec(spec: str, algebra, no: int):
    """``thin V... [: ARROWS]`` or ``rep dims=v:d,... ARROW=[[..]]``."""
    from .quivrep import Rep
    if spec.startswith("thin"):
        body = spec[4:]
        verts, _, arrows = body.partition(":")
        vs = verts.replace(",", " ").split()
        ars = arrows.replace(",", " ").split()
        for a in ars:
            if a not in algebra.arrows:
                raise ScenarioError(f"undefined arrow {a!r}", no)
        try:
            return Rep(algebra, {v: 1 for v in vs}, {a: [[1]] for a in ars}, check=True)
        except ValueError as e:
            raise ScenarioError(str(e), no) from None
    toks = spec.split()[1:]
    _, kw = _kv(toks)
    dims = {}
    for part in kw.pop("dims", "").split(","):
        if part:
            v, d = part.split(":")
            dims[v] = int(d)
    maps = {}
    for a, m in kw.items():
        if a not in algebra.arrows:
            raise ScenarioError(f"undefined arrow {a!r}", no)
        maps[a] = json.loads(m)
    try:
        return Rep(algebra, dims, maps, check=True)
    except ValueError as e:
        raise ScenarioError(str(e), no) from None
