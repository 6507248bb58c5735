"""Command line interface: ``crndep {analyze,check,solve,salt,verify}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

import numpy as np

from .decomp import finest_independent_decomposition
from .depone import FAIL, NA, PASS, check_deficiency_one, check_mass_action
from .equilib import solve_equilibrium
from .graph import GraphError
from .massaction import MassActionSystem, NetworkError
from .netio import ParseError, build_report, emit_report, load_network
from .properties import run_suites
from .ratlin import as_rat
from .salt import salt_certificates

EXIT_CODES = {PASS: 0, FAIL: 2, NA: 3}


def _write(data: bytes | str) -> None:
    if isinstance(data, str):
        data = data.encode("utf-8")
    sys.stdout.buffer.write(data)
    sys.stdout.flush()


def _with_rates(system: MassActionSystem, assignments: Sequence[str] | None) -> MassActionSystem:
    if not assignments:
        return system
    overrides = {}
    for item in assignments:
        for part in item.split(","):
            name, sep, value = part.partition("=")
            if not sep:
                raise NetworkError(f"expected name=value, got {part!r}")
            overrides[name.strip()] = as_rat(value.strip())
    return system.with_rates(overrides)


def _parse_anchor(text: str, species: Sequence[str]) -> list[float]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if all("=" not in p for p in parts):
        values = [float(p) for p in parts]
    else:
        lookup = {s: i for i, s in enumerate(species)}
        lookup.update({f"x{i + 1}": i for i in range(len(species))})
        values = [None] * len(species)
        for p in parts:
            name, _, value = p.partition("=")
            name = name.strip()
            if name not in lookup:
                raise ValueError(f"unknown species {name!r} in anchor")
            values[lookup[name]] = float(value)
        if any(v is None for v in values):
            raise ValueError("anchor must give a value for every species")
    if len(values) != len(species):
        raise ValueError(f"anchor needs {len(species)} values")
    return values


def _verdict(system, theorem):
    dec = finest_independent_decomposition(system)
    fn = check_mass_action if theorem == "dep1" else check_deficiency_one
    return dec, fn(system, dec)


def cmd_analyze(args) -> int:
    system = _with_rates(load_network(args.file), args.k)
    report = build_report(system)
    _write(emit_report(report, "json" if args.json else "text"))
    return 0


def cmd_check(args) -> int:
    system = _with_rates(load_network(args.file), args.k)
    dec, verdict = _verdict(system, args.theorem)
    report = build_report(system, [verdict], dec=dec)
    _write(emit_report(report, "json" if args.json else "text"))
    return EXIT_CODES[verdict.status]


def cmd_solve(args) -> int:
    system = _with_rates(load_network(args.file), args.k)
    anchor = _parse_anchor(args.anchor, system.network.species)
    dec, verdict = _verdict(system, "dep1")
    kind = "stoichiometric" if args.class_kind == "stoich" else "kinetic"
    try:
        result = solve_equilibrium(system, dec, verdict, anchor, kind)
    except ValueError as exc:
        report = build_report(system, [verdict], dec=dec)
        _write(emit_report(report, "json" if args.json else "text"))
        print(f"crndep: cannot solve: {exc}", file=sys.stderr)
        return EXIT_CODES[verdict.status] or 2
    report = build_report(system, [verdict], result, dec=dec)
    _write(emit_report(report, "json" if args.json else "text"))
    return 0


def cmd_salt(args) -> int:
    system = _with_rates(load_network(args.file), args.k)
    g = system.network.graph
    certs = salt_certificates(g, system.k)
    if args.json:
        doc = [
            {
                "T": list(c.T),
                "ordering": list(c.ordering),
                "q_hat": [str(x) for x in c.q_hat],
                "beta": [str(x) for x in c.beta],
                "partial_sums": [str(x) for x in c.partial_sums],
                "strict_positions": list(c.strict_positions),
                "T_equals_V": c.T_equals_V,
                "claims": c.claims(),
            }
            for c in certs
        ]
        _write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return 0
    if not certs:
        _write("no terminal component made of source vertices\n")
    for c in certs:
        lines = [
            f"terminal component T = {{{', '.join(str(v + 1) for v in c.T)}}}",
            f"  q_hat = ({', '.join(str(x) for x in c.q_hat)})",
            f"  beta = ({', '.join(str(x) for x in c.beta)})",
            f"  order = ({', '.join(str(v + 1) for v in c.ordering)})",
            f"  partial sums on T = ({', '.join(str(x) for x in c.partial_sums)})",
            f"  T = V: {'yes' if c.T_equals_V else 'no'}",
        ]
        lines += [f"  [{'pass' if ok else 'fail'}] {name}" for name, ok in c.claims().items()]
        _write("\n".join(lines) + "\n")
    return 0


def cmd_verify(args) -> int:
    seed = int(os.environ.get("CRN_SEED", args.seed))
    system = _with_rates(load_network(args.file), args.k)
    results = run_suites(np.random.default_rng(seed), args.fuzz, base=system)
    ok = True
    lines = [f"seed = {seed}"]
    for r in results:
        ok &= r.ok
        lines.append(f"{'PASS' if r.ok else 'FAIL'} {r.name} ({r.cases} cases)")
        lines += [f"  {msg}" for msg in r.failures[:5]]
    _write("\n".join(lines) + "\n")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crndep", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, json_flag=True):
        p.add_argument("file", help="network file (reaction DSL or JSON)")
        p.add_argument("--k", nargs="+", action="extend", metavar="NAME=VALUE", help="override rate constants")
        if json_flag:
            p.add_argument("--json", action="store_true", help="emit JSON instead of text")

    p = sub.add_parser("analyze", help="structural report and decomposition")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("check", help="check theorem conditions (exit 0 pass, 2 fail, 3 n/a)")
    common(p)
    p.add_argument("--theorem", choices=("dep1", "def1"), required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="unique positive equilibrium in a compatibility class")
    common(p)
    p.add_argument("--anchor", required=True, help="x1=..,x2=.. (species names or x<i>) or a plain list")
    p.add_argument("--class", dest="class_kind", choices=("stoich", "kinetic"), default="stoich")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("salt", help="partial-sum certificates for terminal components")
    common(p)
    p.set_defaults(func=cmd_salt)

    p = sub.add_parser("verify", help="randomized property oracles")
    common(p, json_flag=False)
    p.add_argument("--fuzz", type=int, default=50, help="cases per suite")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (CRN_SEED overrides)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, NetworkError, GraphError, OSError, ValueError) as exc:
        print(f"crndep: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
