"""Reading networks (a line-based reaction DSL or JSON) and writing analysis reports.

DSL, one reaction per line::

    # comments run to the end of the line
    species: X1, X2                 (optional; fixes species order)
    complexes: 0, X1, X1 + X2       (optional; fixes vertex order)
    X1 -> X1 + X2, k12 = 1
    X1 + X2 <-> X2, kf = 2, kr = 1/3
    0 <- X1, k = 0.5

A rate may be called ``k`` (``kf``/``kr`` for reversible lines) to get the
default name ``k<tail><head>``, or given any other identifier, which is kept.
Vertices are identified by their complex, in order of first appearance.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .decomp import Decomposition, NotApplicableError, decomposition_checks, finest_independent_decomposition
from .depone import TheoremVerdict, analyze_class, mass_action_poly_system
from .graph import Digraph, GraphError
from .massaction import MassActionSystem, NetworkError, ReactionNetwork, default_rate_name, structural_report
from .polycore import PolytopeError
from .ratlin import as_rat

SCHEMA_VERSION = 1


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


_TERM = re.compile(r"^\s*(\d+(?:\.\d*)?(?:/\d+)?|\.\d+)?\s*\*?\s*([A-Za-z_][A-Za-z0-9_]*)\s*$")
_ARROW = re.compile(r"<->|->|<-")
_RATE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+)\s*$")


def _parse_complex(text: str, lineno: int) -> dict[str, Fraction]:
    text = text.strip()
    if not text:
        raise ParseError(lineno, "malformed complex: empty")
    if text == "0":
        return {}
    out: dict[str, Fraction] = {}
    for term in text.split("+"):
        m = _TERM.match(term)
        if not m:
            raise ParseError(lineno, f"malformed complex term {term.strip()!r}")
        coeff = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        out[m.group(2)] = out.get(m.group(2), Fraction(0)) + coeff
    return out


def _parse_rate(text: str, lineno: int) -> tuple[str, Fraction]:
    m = _RATE.match(text)
    if not m:
        raise ParseError(lineno, f"malformed rate assignment {text.strip()!r}")
    try:
        value = Fraction(m.group(2))
    except (ValueError, ZeroDivisionError):
        raise ParseError(lineno, f"rate {m.group(1)} is not a rational number") from None
    if value <= 0:
        raise ParseError(lineno, f"rate {m.group(1)} must be positive")
    return m.group(1), value


def parse_network(text: str) -> MassActionSystem:
    """Parse DSL text (or a JSON document, detected by a leading ``{``)."""
    if text.lstrip().startswith("{"):
        return network_from_json(text)
    species: list[str] | None = None
    pinned: list[tuple[int, dict[str, Fraction]]] = []
    reactions = []  # (lineno, tail complex, head complex, rate name, value)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        key = head.strip().lower()
        if rest and key in ("species", "complexes") and not _ARROW.search(head):
            items = [s.strip() for s in rest.split(",") if s.strip()]
            if key == "species":
                if not all(re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", s) for s in items):
                    raise ParseError(lineno, "species names must be identifiers")
                species = items
            else:
                pinned.extend((lineno, _parse_complex(s, lineno)) for s in items)
            continue
        parts = [p for p in line.split(",")]
        arrows = _ARROW.findall(parts[0])
        if len(arrows) != 1:
            raise ParseError(lineno, "expected exactly one of ->, <-, <->")
        left, right = _ARROW.split(parts[0])
        lc, rc = _parse_complex(left, lineno), _parse_complex(right, lineno)
        rates = [_parse_rate(p, lineno) for p in parts[1:]]
        arrow = arrows[0]
        if arrow == "<->":
            if len(rates) != 2:
                raise ParseError(lineno, "a reversible reaction needs two rates (forward, reverse)")
            reactions.append((lineno, lc, rc, *rates[0]))
            reactions.append((lineno, rc, lc, *rates[1]))
        else:
            if len(rates) != 1:
                raise ParseError(lineno, "missing rate constant" if not rates else "too many rates")
            if arrow == "<-":
                lc, rc = rc, lc
            reactions.append((lineno, lc, rc, *rates[0]))
    if not reactions:
        raise ParseError(0, "no reactions")

    if species is None:
        seen: dict[str, None] = {}
        for _, c in pinned:
            seen.update(dict.fromkeys(c))
        for _, a, b, _, _ in reactions:
            seen.update(dict.fromkeys(a))
            seen.update(dict.fromkeys(b))
        species = list(seen) or ["X1"]
    index = {s: i for i, s in enumerate(species)}

    def vec(c, lineno):
        v = [Fraction(0)] * len(species)
        for s, x in c.items():
            if s not in index:
                raise ParseError(lineno, f"undeclared species {s!r}")
            v[index[s]] = x
        return tuple(v)

    vertices: dict[tuple, int] = {}
    for lineno, c in pinned:
        v = vec(c, lineno)
        if v in vertices:
            raise ParseError(lineno, "complex listed twice")
        vertices[v] = len(vertices)
    edges, names, ks, seen_edges = [], [], [], set()
    for lineno, a, b, name, value in reactions:
        va, vb = vec(a, lineno), vec(b, lineno)
        for v in (va, vb):
            vertices.setdefault(v, len(vertices))
        e = (vertices[va], vertices[vb])
        if e[0] == e[1]:
            raise ParseError(lineno, "reaction from a complex to itself")
        if e in seen_edges:
            raise ParseError(lineno, "duplicate edge")
        seen_edges.add(e)
        edges.append(e)
        ks.append(value)
        names.append(default_rate_name(*e) if name in ("k", "kf", "kr") else name)
    if len(set(names)) != len(names):
        raise ParseError(reactions[-1][0], "rate names must be unique")
    complexes = [None] * len(vertices)
    for v, i in vertices.items():
        complexes[i] = v
    try:
        net = ReactionNetwork(tuple(species), Digraph(len(complexes), tuple(edges)), tuple(complexes))
        return MassActionSystem(net, tuple(ks), tuple(names))
    except (NetworkError, GraphError) as exc:
        raise ParseError(0, str(exc)) from None


def network_from_json(doc: str | dict) -> MassActionSystem:
    """``{"species": [...], "complexes": [[...], ...], "edges": [{"source", "target", "k", "name"?}]}``.

    Vertex indices are 0-based; numbers may be JSON numbers or "p/q" strings.
    """
    data = json.loads(doc) if isinstance(doc, str) else doc
    try:
        species = tuple(data["species"])
        complexes = tuple(tuple(as_rat(x) for x in row) for row in data["complexes"])
        edges = tuple((int(e["source"]), int(e["target"])) for e in data["edges"])
        ks = tuple(as_rat(e["k"]) for e in data["edges"])
        names = tuple(e.get("name") or default_rate_name(*p) for e, p in zip(data["edges"], edges))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(0, f"malformed JSON network: {exc}") from None
    try:
        net = ReactionNetwork(species, Digraph(len(complexes), edges), complexes)
        return MassActionSystem(net, ks, names)
    except (NetworkError, GraphError) as exc:
        raise ParseError(0, str(exc)) from None


def load_network(path: str | Path) -> MassActionSystem:
    return parse_network(Path(path).read_text(encoding="utf-8"))


def format_complex(species: Sequence[str], v: Sequence[Fraction]) -> str:
    terms = []
    for s, x in zip(species, v):
        if x == 0:
            continue
        if x < 0:
            raise ValueError("the DSL cannot express negative stoichiometric coefficients")
        terms.append(s if x == 1 else f"{x} {s}")
    return " + ".join(terms) if terms else "0"


def serialize_network(sys: MassActionSystem, fmt: str = "dsl") -> str:
    net = sys.network
    if fmt == "json":
        doc = {
            "species": list(net.species),
            "complexes": [[str(x) for x in c] for c in net.complexes],
            "edges": [
                {"source": a, "target": b, "k": str(k), "name": name}
                for (a, b), k, name in zip(net.edges, sys.k, sys.rate_names)
            ],
        }
        return json.dumps(doc, indent=2) + "\n"
    cx = [format_complex(net.species, c) for c in net.complexes]
    lines = ["species: " + ", ".join(net.species), "complexes: " + ", ".join(cx)]
    for (a, b), k, name in zip(net.edges, sys.k, sys.rate_names):
        lines.append(f"{cx[a]} -> {cx[b]}, {name} = {k}")
    return "\n".join(lines) + "\n"


# --- reports -------------------------------------------------------------------------


def _q(x) -> str:
    return str(Fraction(x))


def _qv(v) -> list[str] | None:
    return None if v is None else [_q(x) for x in v]


@dataclass
class AnalysisReport:
    """Plain-data report: rationals are "p/q" strings, floats stay floats."""

    schema_version: int
    structural: dict
    decomposition: dict
    verdicts: list = field(default_factory=list)
    equilibrium: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def structural_summary(sys: MassActionSystem) -> dict:
    r = structural_report(sys)
    return {
        "species": list(sys.network.species),
        "n_vertices": r.n_vertices,
        "n_sources": r.n_sources,
        "n_edges": len(sys.network.edges),
        "rate_names": list(sys.rate_names),
        "k": _qv(sys.k),
        "l": r.l,
        "t": r.t,
        "t_prime": r.t_prime,
        "dim_S": r.dim_S,
        "dim_K": r.dim_K,
        "dim_L": r.dim_L,
        "delta": r.delta,
        "d": r.d,
        "K_equals_S": r.K_equals_S,
        "L_equals_S": r.L_equals_S,
        "K_equals_L": r.K_equals_L,
        "weakly_reversible": r.stats.weakly_reversible,
        "Gamma_k": [_qv(row) for row in r.Gamma_k.to_rows()],
    }


def decomposition_summary(sys: MassActionSystem, dec: Decomposition | None = None) -> dict:
    dec = dec or finest_independent_decomposition(sys)
    psys = mass_action_poly_system(dec) if dec.independent_ok else None
    classes = []
    for s in dec.subnetworks:
        row = {
            "edges": [sys.rate_names[j] for j in s.edges],
            "delta": s.delta,
            "d": s.d,
            "t": s.t,
            "t_prime": s.t_prime,
            "dimP": None,
            "q": None,
            "b": None,
            "b_tilde": None,
            "note": "",
        }
        if psys is not None:
            try:
                ca = analyze_class(psys, None, s.index)
                row.update(
                    dimP=ca.dimP,
                    q=_qv(ca.q),
                    b=_qv(ca.b),
                    b_tilde=_qv(ca.b_tilde) if ca.b is not None and ca.q is not None else None,
                )
            except (NotApplicableError, PolytopeError) as exc:
                row["note"] = str(exc)
        classes.append(row)
    checks = None
    if dec.connected_ok:
        chk = decomposition_checks(dec)
        checks = {label: ok for label, ok in chk.items()}
    return {
        "ell": dec.ell,
        "connected_ok": dec.connected_ok,
        "independent_ok": dec.independent_ok,
        "classes": classes,
        "checks": checks,
    }


def verdict_summary(v: TheoremVerdict) -> dict:
    def conds(cs):
        return [{"label": c.label, "status": c.status, "witness": c.witness} for c in cs]

    return {
        "theorem": v.theorem,
        "status": v.status,
        "conclusion": v.conclusion,
        "conclusions": list(v.conclusions),
        "conditions": conds(v.conditions),
        "diagnostics": conds(v.diagnostics),
        "case": v.case,
    }


def equilibrium_summary(res) -> dict:
    return {
        "class_kind": res.class_kind,
        "anchor": [float(x) for x in res.anchor],
        "x_star": [float(x) for x in res.x_star],
        "x": [float(x) for x in res.x_in_class],
        "residual": float(res.residual),
        "t_roots": [None if t is None else float(t) for t in res.t_roots],
        "newton_iterations": int(res.newton_iterations),
        "unique_in_class": bool(res.unique_in_class),
    }


def build_report(
    sys: MassActionSystem,
    verdicts: Sequence[TheoremVerdict] = (),
    equilibrium=None,
    dec: Decomposition | None = None,
) -> AnalysisReport:
    return AnalysisReport(
        schema_version=SCHEMA_VERSION,
        structural=structural_summary(sys),
        decomposition=decomposition_summary(sys, dec),
        verdicts=[verdict_summary(v) for v in verdicts],
        equilibrium=None if equilibrium is None else equilibrium_summary(equilibrium),
    )


def _json(value: Any, indent: int, level: int) -> str:
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError("non-finite float in report")
        return format(value, ".17g")
    if isinstance(value, Fraction):
        return json.dumps(str(value))
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {_json(value[k], indent, level + 1)}"
                 for k in sorted(value)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [inner + _json(x, indent, level + 1) for x in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _tuple(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def _float_tuple(v) -> str:
    return "(" + ", ".join(f"{x:.12g}" for x in v) + ")"


def _text(report: AnalysisReport) -> str:
    s = report.structural
    out = [
        f"network: {len(s['species'])} species ({', '.join(s['species'])}), "
        f"{s['n_vertices']} vertices ({s['n_sources']} sources), {s['n_edges']} edges",
        f"l = {s['l']}",
        f"t = {s['t']}",
        f"t' = {s['t_prime']}",
        f"dim S = {s['dim_S']}",
        f"dim K = {s['dim_K']}",
        f"dim L = {s['dim_L']}",
        f"delta = {s['delta']}",
        f"d = {s['d']}",
        f"weakly reversible: {'yes' if s['weakly_reversible'] else 'no'}",
    ]
    dc = report.decomposition
    out.append(
        f"decomposition: ell = {dc['ell']} "
        f"(connected: {'yes' if dc['connected_ok'] else 'no'}, "
        f"independent: {'yes' if dc['independent_ok'] else 'no'})"
    )
    for i, c in enumerate(dc["classes"], start=1):
        dimP = "-" if c["dimP"] is None else c["dimP"]
        out.append(
            f"class {i}: edges {', '.join(c['edges'])}; delta = {c['delta']}, d = {c['d']}, "
            f"t = {c['t']}, t' = {c['t_prime']}, dim P = {dimP}"
        )
        for key in ("q", "b", "b_tilde"):
            if c[key] is not None:
                out.append(f"  {key} = {_tuple(c[key])}")
        if c["note"]:
            out.append(f"  note: {c['note']}")
    if dc["checks"] is not None:
        for label, ok in dc["checks"].items():
            out.append(f"  [{'pass' if ok else 'fail'}] {label}")
    for v in report.verdicts:
        out.append(f"theorem {v['theorem']}: {v['status']}")
        for c in v["conditions"]:
            wit = f" -- {c['witness']}" if c["witness"] else ""
            out.append(f"  [{c['status']}] {c['label']}{wit}")
        for c in v["diagnostics"]:
            wit = f" -- {c['witness']}" if c["witness"] else ""
            out.append(f"  (diagnostic) [{c['status']}] {c['label']}{wit}")
        if v["case"]:
            out.append(f"  case: {v['case']}")
        out.append(f"  conclusion: {'; '.join(v['conclusions']) or v['conclusion']}")
    eq = report.equilibrium
    if eq is not None:
        out.append(f"equilibrium in the {eq['class_kind']} class of x' = {_float_tuple(eq['anchor'])}:")
        out.append(f"  x = {_float_tuple(eq['x'])}")
        out.append(f"  x_star = {_float_tuple(eq['x_star'])}")
        roots = ", ".join("-" if t is None else f"{t:.15g}" for t in eq["t_roots"])
        out.append(f"  t roots = ({roots})")
        out.append(f"  residual = {eq['residual']:.3e}")
    return "\n".join(out) + "\n"


def emit_report(report: AnalysisReport, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (_json(report.to_dict(), 2, 0) + "\n").encode("utf-8")
    if fmt == "text":
        return _text(report).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def report_from_json(data: bytes | str) -> AnalysisReport:
    doc = json.loads(data)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {doc.get('schema_version')!r}")
    return AnalysisReport(
        schema_version=doc["schema_version"],
        structural=doc["structural"],
        decomposition=doc["decomposition"],
        verdicts=doc["verdicts"],
        equilibrium=doc["equilibrium"],
    )
