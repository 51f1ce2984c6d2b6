"""Command-line front end.

Verdicts never ride the exit code: 0 means the computation ran (whatever the
answer), 2 is a usage error, 3 a resource limit, 1 a failed verification run.
``--json`` emits a self-describing report (command echo, input fingerprint,
timings, limits hit) that validates against the shipped schema.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import shlex
import sys
import time
from pathlib import Path
from typing import Optional

from .ael import expansion_exists, format_ae_theory, parse_ae_theory
from .bench import rows_to_csv, run_bench
from .dl import extension_exists, format_default_theory, parse_default_theory
from .encodings import (
    expansion_existence,
    extension_existence,
    implication,
    mso_encoding,
    satisfiability,
)
from .errors import NmlkitError, ParseError, ResourceLimitError
from .families import PseudoCliqueSpec, gen_ael_lower, gen_dl_lower, gen_imp_lower, gen_pseudo_clique
from .formula import Basis, atom_label, format_formula, parse_formula, sat_bruteforce, implies_bruteforce
from .harness import run_all
from .mso import eval_mso
from .structures import (
    build_ael_structure,
    build_dl_structure,
    build_imp_structure,
    build_prop_structure,
    emit_gr,
    emit_labels,
    gaifman_graph,
    parse_gr,
    parse_labels,
)
from .structures import Graph
from .treewidth import (
    emit_td,
    exact_treewidth,
    heuristic_decomposition,
    normalize_pseudo,
    parse_td,
    pseudo_clique_lower_bound,
    validate_decomposition,
    width,
)
from .twdp import dp_implication, dp_sat, entailment_oracle

BASIS = Basis()


class _Report:
    def __init__(self, argv: list[str]):
        self.command = "nmlkit " + " ".join(shlex.quote(a) for a in argv)
        self.input_sha256: Optional[str] = None
        self.timings: dict[str, float] = {}
        self.limits_hit: list[str] = []
        self.result: dict = {}

    def fingerprint(self, text: str) -> None:
        self.input_sha256 = hashlib.sha256(text.encode()).hexdigest()

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "input_sha256": self.input_sha256,
            "timings_ms": {k: round(v, 3) for k, v in self.timings.items()},
            "limits_hit": self.limits_hit,
        }
        payload.update(self.result)
        return json.dumps(payload, indent=2, sort_keys=True)


def _read(path: str, report: _Report) -> str:
    text = Path(path).read_text()
    report.fingerprint(text)
    return text


def _parse_imp_file(text: str) -> tuple[list, list]:
    premises, conclusions = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep or head.strip() not in ("p", "c"):
            raise ParseError(f"expected 'p:' or 'c:' line, got {line!r}", line=lineno)
        formula = parse_formula(rest, "prop", BASIS)
        (premises if head.strip() == "p" else conclusions).append(formula)
    return premises, conclusions


def _parse_fs_file(text: str) -> list:
    formulas = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        formulas.append(parse_formula(line, "prop", BASIS))
    return formulas


def _emit(report: _Report, args, lines: list[str]) -> None:
    if getattr(args, "json", False):
        print(report.to_json())
    else:
        for line in lines:
            print(line)


def _load_graph(path: str, report: _Report) -> Graph:
    return parse_gr(_read(path, report))


def _write_or_print(text: str, out: Optional[str], as_json: bool = False) -> None:
    """Write an artifact to a file, or to stdout unless a JSON report is the
    requested stdout payload."""
    if out:
        Path(out).write_text(text)
    elif not as_json:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_fmt(args, report: _Report) -> list[str]:
    oracle_kind = args.oracle
    t0 = time.perf_counter()
    if args.fmt_cmd == "check-sat":
        formulas = _parse_fs_file(_read(args.file, report))
        if oracle_kind == "brute":
            witness = sat_bruteforce(formulas)
            satisfiable = witness is not None
            witness_obj = (
                {atom_label(k): v for k, v in witness.items()} if witness else None
            )
        else:
            satisfiable = dp_sat(formulas)
            witness_obj = None
        report.timings["solve"] = (time.perf_counter() - t0) * 1000
        report.result = {"satisfiable": satisfiable, "witness": witness_obj}
        return [f"satisfiable: {satisfiable}"]
    premises, conclusions = _parse_imp_file(_read(args.file, report))
    if oracle_kind == "brute":
        holds = implies_bruteforce(premises, conclusions)
    else:
        holds = dp_implication(premises, conclusions)
    report.timings["solve"] = (time.perf_counter() - t0) * 1000
    report.result = {"implies": holds}
    return [f"implies: {holds}"]


def _cmd_dl(args, report: _Report) -> list[str]:
    theory = parse_default_theory(_read(args.file, report), BASIS)
    t0 = time.perf_counter()
    if args.method == "mso":
        verdict = eval_mso(build_dl_structure(theory, BASIS), extension_existence(BASIS))
        witnesses: list[list[int]] = []
        report.result = {"exists": verdict, "witnesses": witnesses, "method": "mso"}
        lines = [f"exists: {verdict} (model checking; no witnesses enumerated)"]
    else:
        exists, found = extension_exists(theory, entailment_oracle(args.oracle))
        witnesses = [sorted(w.generating) for w in found]
        report.result = {"exists": exists, "witnesses": witnesses, "method": "enum"}
        lines = [f"exists: {exists}"] + [f"generating defaults: {w}" for w in witnesses]
    report.timings["solve"] = (time.perf_counter() - t0) * 1000
    return lines


def _cmd_ael(args, report: _Report) -> list[str]:
    sigma = parse_ae_theory(_read(args.file, report), BASIS)
    t0 = time.perf_counter()
    if args.method == "mso":
        verdict = eval_mso(build_ael_structure(sigma.formulas, BASIS), expansion_existence(BASIS))
        report.result = {"exists": verdict, "full_sets": [], "method": "mso"}
        lines = [f"exists: {verdict} (model checking; no full sets enumerated)"]
    else:
        exists, found = expansion_exists(sigma)
        full_sets = [
            [
                {"Lphi": format_formula(bel), "sign": "+" if positive else "-"}
                for bel, positive in candidate.entries
            ]
            for candidate in found
        ]
        report.result = {"exists": exists, "full_sets": full_sets, "method": "fullsets"}
        lines = [f"exists: {exists}"] + [f"full set: {c}" for c in found]
    report.timings["solve"] = (time.perf_counter() - t0) * 1000
    return lines


def _build_structure(kind: str, text: str):
    if kind == "prop":
        return build_prop_structure(_parse_fs_file(text), BASIS)
    if kind == "imp":
        premises, conclusions = _parse_imp_file(text)
        return build_imp_structure(premises, conclusions, BASIS)
    if kind == "dl":
        return build_dl_structure(parse_default_theory(text, BASIS), BASIS)
    return build_ael_structure(parse_ae_theory(text, BASIS).formulas, BASIS)


def _cmd_struct(args, report: _Report) -> list[str]:
    structure = _build_structure(args.kind, _read(args.file, report))
    g = gaifman_graph(structure)
    text = emit_gr(g)
    _write_or_print(text, args.output, getattr(args, "json", False))
    lines = [f"universe: {g.n} elements, {len(g.edges)} gaifman edges"]
    if args.labels:
        labels_text = emit_labels(g)
        if args.output:
            Path(args.output).with_suffix(".labels").write_text(labels_text)
            lines.append(f"labels written next to {args.output}")
        else:
            sys.stdout.write(labels_text)
    report.result = {"n_vertices": g.n, "n_edges": len(g.edges)}
    return lines


def _cmd_tw(args, report: _Report) -> list[str]:
    if args.tw_cmd == "compute":
        g = _load_graph(args.file, report)
        t0 = time.perf_counter()
        if args.exact:
            w, td = exact_treewidth(g)
            method = "exact"
        else:
            td = heuristic_decomposition(g, args.method)
            w = width(td)
            method = args.method
        report.timings["compute"] = (time.perf_counter() - t0) * 1000
        if args.output:
            Path(args.output).write_text(emit_td(td, g.n))
        report.result = {"width": w, "method": method, "n_vertices": g.n}
        return [f"width: {w} ({method})"]
    if args.tw_cmd == "verify":
        g = _load_graph(args.graph, report)
        td, _ = parse_td(Path(args.decomposition).read_text())
        violations = validate_decomposition(g, td)
        report.result = {"valid": not violations, "violations": violations}
        return [f"valid: {not violations}"] + violations
    if args.tw_cmd == "normalize":
        g = _load_graph(args.graph, report)
        labels, descriptions = parse_labels(Path(args.labels_file).read_text())
        g = Graph(g.n, g.edges, labels, descriptions)
        td, _ = parse_td(Path(args.decomposition).read_text())
        out = normalize_pseudo(g, td)
        _write_or_print(emit_td(out, g.n), args.output, getattr(args, "json", False))
        report.result = {"width": width(out), "valid": not validate_decomposition(g, out)}
        return [f"normalized width: {width(out)}"]
    g = _load_graph(args.file, report)
    r = pseudo_clique_lower_bound(g)
    report.result = {"pseudo_clique_size": r, "tw_lower_bound": r - 1}
    return [f"pseudo-clique size: {r} (treewidth >= {r - 1})"]


def _cmd_gen(args, report: _Report) -> list[str]:
    if args.gen_cmd == "pseudo-clique":
        g = gen_pseudo_clique(PseudoCliqueSpec(args.n, args.k))
        _write_or_print(emit_gr(g), args.output, getattr(args, "json", False))
        if args.labels:
            if args.output:
                Path(args.output).with_suffix(".labels").write_text(emit_labels(g))
            else:
                sys.stdout.write(emit_labels(g))
        report.result = {"n_vertices": g.n, "n_edges": len(g.edges)}
        return []
    if args.gen_cmd == "dl-lower":
        theory = gen_dl_lower(args.n, args.variant)
        _write_or_print(format_default_theory(theory), args.output, getattr(args, "json", False))
        report.result = {"n_rules": len(theory.defaults)}
        return []
    if args.gen_cmd == "ael-lower":
        sigma = gen_ael_lower(args.k)
        _write_or_print(format_ae_theory(sigma), args.output, getattr(args, "json", False))
        report.result = {"n_formulas": len(sigma.formulas)}
        return []
    premises, conclusions = gen_imp_lower(args.kind, args.n)
    lines = [f"p: {format_formula(f)}" for f in premises]
    lines += [f"c: {format_formula(f)}" for f in conclusions]
    _write_or_print("\n".join(lines) + "\n", args.output, getattr(args, "json", False))
    report.result = {"n_premises": len(premises), "n_conclusions": len(conclusions)}
    return []


def _cmd_mso(args, report: _Report) -> list[str]:
    text = _read(args.file, report)
    structure = _build_structure(args.kind, text)
    name = args.name.replace("-", "_")
    default_kind = {"sat": "prop", "imp": "imp", "extension": "dl", "full_exists": "ae"}
    if name in default_kind and args.kind != default_kind[name]:
        raise NmlkitError(
            f"encoding {args.name!r} expects --kind {default_kind[name]}"
        )
    phi = mso_encoding(name, BASIS, args.variant, flavor=args.kind)
    t0 = time.perf_counter()
    verdict = eval_mso(structure, phi)
    report.timings["eval"] = (time.perf_counter() - t0) * 1000
    report.result = {"holds": verdict, "method": f"mso/{args.variant}"}
    return [f"holds: {verdict}"]


def _cmd_verify(args, report: _Report) -> tuple[list[str], int]:
    results = run_all(seed=args.seed, quick=args.quick)
    checks = [
        {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
    ]
    report.result = {"checks": checks}
    lines = [r.line() for r in results]
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} checks passed")
    return lines, 0 if n_pass == len(results) else 1


def _cmd_bench(args, report: _Report) -> list[str]:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    rows = run_bench(args.family, sizes, method=args.method, seed=args.seed)
    text = rows_to_csv(rows)
    if args.csv:
        Path(args.csv).write_text(text)
        out = [f"wrote {len(rows)} rows to {args.csv}"]
    else:
        out = text.rstrip("\n").splitlines()
    report.result = {
        "checks": [
            {"name": f"{r.family}/{r.param}", "passed": r.verdict != "error", "detail": r.verdict}
            for r in rows
        ]
    }
    return out


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmlkit",
        description="Nonmonotonic-logic toolkit: formulas, structures, MSO model checking, treewidth",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    fmt = sub.add_parser("fmt", help="propositional formula sets")
    fmt_sub = fmt.add_subparsers(dest="fmt_cmd", required=True)
    for name, filehelp in (("check-sat", ".fs file"), ("check-imp", ".imp file")):
        p = fmt_sub.add_parser(name)
        p.add_argument("file", help=filehelp)
        p.add_argument("--oracle", choices=("brute", "twdp"), default="twdp")
        p.add_argument("--json", action="store_true")

    dl = sub.add_parser("dl", help="default logic")
    dl_sub = dl.add_subparsers(dest="dl_cmd", required=True)
    p = dl_sub.add_parser("solve")
    p.add_argument("file", help=".dt file")
    p.add_argument("--method", choices=("enum", "mso"), default="enum")
    p.add_argument("--oracle", choices=("brute", "twdp"), default="brute")
    p.add_argument("--json", action="store_true")

    ael = sub.add_parser("ael", help="autoepistemic logic")
    ael_sub = ael.add_subparsers(dest="ael_cmd", required=True)
    p = ael_sub.add_parser("solve")
    p.add_argument("file", help=".ae file")
    p.add_argument("--method", choices=("fullsets", "mso"), default="fullsets")
    p.add_argument("--json", action="store_true")

    st = sub.add_parser("struct", help="relational structures")
    st_sub = st.add_subparsers(dest="struct_cmd", required=True)
    p = st_sub.add_parser("build")
    p.add_argument("file")
    p.add_argument("--kind", choices=("prop", "imp", "dl", "ae"), required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--labels", action="store_true")
    p.add_argument("--json", action="store_true")

    tw = sub.add_parser("tw", help="tree decompositions")
    tw_sub = tw.add_subparsers(dest="tw_cmd", required=True)
    p = tw_sub.add_parser("compute")
    p.add_argument("file", help=".gr file")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--method", choices=("min_fill", "min_degree"), default="min_fill")
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p = tw_sub.add_parser("verify")
    p.add_argument("graph", help=".gr file")
    p.add_argument("decomposition", help=".td file")
    p.add_argument("--json", action="store_true")
    p = tw_sub.add_parser("normalize")
    p.add_argument("graph", help=".gr file")
    p.add_argument("decomposition", help=".td file")
    p.add_argument("--labels-file", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p = tw_sub.add_parser("lower-bound")
    p.add_argument("file", help=".gr file")
    p.add_argument("--json", action="store_true")

    gen = sub.add_parser("gen", help="instance generators")
    gen_sub = gen.add_subparsers(dest="gen_cmd", required=True)
    p = gen_sub.add_parser("pseudo-clique")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--labels", action="store_true")
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p = gen_sub.add_parser("dl-lower")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--variant", choices=("printed", "symmetric"), default="printed")
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p = gen_sub.add_parser("ael-lower")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p = gen_sub.add_parser("imp-lower")
    p.add_argument("--kind", choices=("xor3", "cnf_dnf"), required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")

    mso = sub.add_parser("mso", help="MSO model checking")
    mso_sub = mso.add_subparsers(dest="mso_cmd", required=True)
    p = mso_sub.add_parser("eval")
    p.add_argument("file")
    p.add_argument("--kind", choices=("prop", "imp", "dl", "ae"), required=True)
    p.add_argument(
        "--name",
        choices=("struc", "sat", "imp", "extension", "full-exists", "full_exists"),
        required=True,
    )
    p.add_argument("--variant", choices=("corrected", "as_printed"), default="corrected")
    p.add_argument("--json", action="store_true")

    verify = sub.add_parser("verify-paper", help="run the full verification suite")
    verify.add_argument("--quick", action="store_true")
    verify.add_argument("--seed", type=int, default=1)
    verify.add_argument("--json", action="store_true")

    bench = sub.add_parser("bench", help="benchmark runner")
    bench.add_argument("--family", choices=("chain", "pseudo-clique", "brute-sat"), required=True)
    bench.add_argument("--sizes", required=True, help="comma-separated instance sizes")
    bench.add_argument("--method", choices=("dp", "brute", "exact"), default="dp")
    bench.add_argument("--seed", type=int, default=1)
    bench.add_argument("--csv", help="write the CSV summary to this path")
    bench.add_argument("--json", action="store_true")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    report = _Report(argv)
    exit_code = 0
    try:
        if args.cmd == "fmt":
            lines = _cmd_fmt(args, report)
        elif args.cmd == "dl":
            lines = _cmd_dl(args, report)
        elif args.cmd == "ael":
            lines = _cmd_ael(args, report)
        elif args.cmd == "struct":
            lines = _cmd_struct(args, report)
        elif args.cmd == "tw":
            lines = _cmd_tw(args, report)
        elif args.cmd == "gen":
            lines = _cmd_gen(args, report)
        elif args.cmd == "mso":
            lines = _cmd_mso(args, report)
        elif args.cmd == "verify-paper":
            lines, exit_code = _cmd_verify(args, report)
        elif args.cmd == "bench":
            lines = _cmd_bench(args, report)
        else:  # pragma: no cover
            parser.error(f"unknown command {args.cmd!r}")
    except ResourceLimitError as exc:
        report.limits_hit.append(str(exc))
        if getattr(args, "json", False):
            print(report.to_json())
        else:
            print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except (OSError, NmlkitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, args, lines)
    return exit_code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
