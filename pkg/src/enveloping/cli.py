"""Command-line surface: load algebras, run computations and verification
suites, emit deterministic machine-readable reports.

Exit codes: 0 all checks pass, 1 a check failed, 2 input could not be
parsed, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources

from . import bgg, linfty, permutahedra, tableaux, uea
from .exactlin import Generator, Vector

TEXT = "text"
JSON = "json"

BUNDLED = (
    "abelian1",
    "abelian2",
    "abelian3",
    "sl2",
    "sl2_adjoint",
    "heisenberg",
    "odd1",
    "odd2",
    "l3only",
    "ci_cubic",
)


class ParseFailure(Exception):
    pass


class Report:
    """Deterministic run report; timings only surface when asked for."""

    def __init__(self, command, config):
        self.command = command
        self.config = config
        self.checks = []

    def add(self, name, result, elapsed, extra=None):
        entry = {"name": name, "status": "pass" if result else "fail"}
        if not result and getattr(result, "counterexample", None) is not None:
            entry["counterexample"] = _serialize(result.counterexample)
        if extra is not None:
            entry.update(extra)
        entry["_elapsed"] = elapsed
        self.checks.append(entry)

    def run(self, name, fn):
        start = time.monotonic()
        result = fn()
        self.add(name, result, time.monotonic() - start)
        return result

    @property
    def ok(self):
        return all(c["status"] == "pass" for c in self.checks)

    def as_dict(self, timings=False):
        checks = []
        for c in self.checks:
            c2 = {k: v for k, v in c.items() if not k.startswith("_")}
            if timings:
                c2["time_s"] = round(c["_elapsed"], 6)
            checks.append(c2)
        return {
            "command": self.command,
            "config": self.config,
            "checks": checks,
            "exit_status": 0 if self.ok else 1,
        }

    def emit(self, fmt, timings=False, payload=None):
        data = self.as_dict(timings)
        if payload:
            data.update(payload)
        if fmt == JSON:
            print(json.dumps(data, indent=2))
            return
        print("command: %s" % self.command)
        for key, value in self.config.items():
            print("  %s: %s" % (key, value))
        for c in self.checks:
            line = "  [%s] %s" % ("ok" if c["status"] == "pass" else "FAIL", c["name"])
            if timings:
                line += "  (%.3fs)" % c["_elapsed"]
            print(line)
            if "counterexample" in c:
                print("      counterexample: %s" % (c["counterexample"],))
        print("result: %s" % ("pass" if self.ok else "fail"))


def _serialize(obj):
    if obj is None:
        return None
    if isinstance(obj, (list, tuple, frozenset, set)):
        return [_serialize(x) for x in sorted(obj, key=repr)]
    if hasattr(obj, "serialize"):
        return obj.serialize()
    if hasattr(obj, "letters"):
        return repr(obj)
    if isinstance(obj, Generator):
        return obj.id
    return repr(obj)


def load_input(path):
    if path is None:
        raise ParseFailure("this command needs --input")
    if path.startswith("bundled:"):
        name = path.split(":", 1)[1]
        if name not in BUNDLED:
            raise ParseFailure("unknown bundled input %r" % name)
        text = resources.files("enveloping.data").joinpath(name + ".json").read_text()
        data = json.loads(text)
    else:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseFailure(str(exc))
    try:
        algebra = linfty.algebra_from_json(data)
        module = None
        if "module" in data:
            module = linfty.module_from_json(algebra, data["module"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseFailure("bad algebra description: %s" % exc)
    return algebra, module


def cmd_validate(args):
    report = Report("validate", _config(args))
    algebra, module = load_input(args.input)
    report.run("check_linfty[%s]" % (algebra.name or "input"),
               lambda: linfty.check_linfty(algebra, args.weight_cap))
    if module is not None:
        report.run("check_module", lambda: linfty.check_module(module, args.weight_cap))
    return report, None


def cmd_products(args):
    report = Report("products", _config(args))
    algebra, _ = load_input(args.input)
    result = report.run("check_linfty", lambda: linfty.check_linfty(algebra, args.weight_cap))
    if not result:
        return report, None
    structure = uea.AInftyStructure(algebra, args.arity_cap, args.weight_cap)
    tables = structure.export_tables()
    report.run("stasheff", lambda: uea.stasheff_check(structure))
    return report, {"products": tables}


SUITES = (
    "stasheff",
    "pbw",
    "alt",
    "involution",
    "coproduct",
    "morphism",
    "truncation",
    "theorem1",
    "permutahedron",
    "tableaux",
    "bgg",
    "all",
)


def cmd_check(args):
    report = Report("check", _config(args))
    suites = SUITES[:-1] if args.suite == "all" else (args.suite,)
    algebra = module = None
    if args.input is not None:
        algebra, module = load_input(args.input)
    structure = None

    def need_structure():
        nonlocal structure
        if algebra is None:
            raise ParseFailure("suite %r needs --input" % (suite,))
        if structure is None:
            structure = uea.AInftyStructure(algebra, args.arity_cap, args.weight_cap)
        return structure

    for suite in suites:
        if suite == "stasheff":
            report.run("stasheff", lambda: uea.stasheff_check(need_structure()))
        elif suite == "pbw":
            if algebra is not None and algebra.is_dg_lie():
                report.run("pbw", lambda: uea.pbw_compare(need_structure()))
            elif args.suite != "all":
                report.run("pbw", lambda: uea.pbw_compare(need_structure()))
        elif suite == "alt":
            for n in range(2, min(args.arity_cap, 3) + 1):
                report.run("alt[n=%d]" % n,
                           lambda n=n: uea.alt_bracket_check(need_structure(), n))
        elif suite == "involution":
            report.run("involution", lambda: uea.involution_check(
                need_structure(), tuple(range(1, args.arity_cap + 1))))
        elif suite == "coproduct":
            report.run("coproduct", lambda: uea.coproduct_strictness_check(
                need_structure(), min(args.arity_cap, 2), min(args.weight_cap, 3)))
        elif suite == "truncation":
            report.run("truncation", lambda: uea.truncation_agreement_check(
                algebra if algebra is not None else _need(suite), args.weight_cap))
        elif suite == "morphism":
            for name, result in _morphism_suite(args):
                report.add(name, result, 0.0)
        elif suite == "theorem1":
            for name, result in _theorem1_suite(args):
                report.add(name, result, 0.0)
        elif suite == "permutahedron":
            _permutahedron_checks(report, args.n_cap)
        elif suite == "tableaux":
            _tableaux_checks(report, min(args.n_cap, 4))
        elif suite == "bgg":
            for name, result in _bgg_suite(args, need_structure()):
                report.add(name, result, 0.0)
    return report, None


def _need(suite):
    raise ParseFailure("suite %r needs --input" % suite)


def _morphism_suite(args):
    H = linfty.heisenberg()
    A2 = linfty.abelian([0, 0])
    x, y, z = (H.by_id[k] for k in ("x", "y", "z"))
    a1, a2 = A2.by_id["a1"], A2.by_id["a2"]
    strict = linfty.LInftyMorphism(H, A2, {1: {(x,): {a1: 1}, (y,): {a2: 1}, (z,): {}}})
    La = linfty.LInftyAlgebra([Generator("a", 1)], {}, name="A")
    Lb = linfty.LInftyAlgebra([Generator("b", 1)], {}, name="B")
    a, b = La.by_id["a"], Lb.by_id["b"]
    bent = linfty.LInftyMorphism(La, Lb, {1: {(a,): {b: 1}}, 2: {(a, a): {b: 1}}})
    out = []
    out.append(("morphism: strict map valid", linfty.check_morphism(strict, 3)))
    data = uea.u_morphism(strict, 3, 3)
    out.append(("morphism: first component", uea.check_first_component(data)))
    out.append(("morphism: strict vanishing", uea.check_strict_vanishing(data)))
    out.append(("morphism: non-strict valid", linfty.check_morphism(bent, 3)))
    data2 = uea.u_morphism(bent, 3, 3)
    out.append(("morphism: non-strict chain map", uea.check_morphism_chain_map(data2)))
    res, _ = uea.composition_homotopy_check(bent, linfty.identity_morphism(Lb), 2, 3)
    out.append(("morphism: strict factor homotopy vanishes", res))
    return out


def _theorem1_suite(args):
    from .hpt import cobar_differential
    from .linfty import CECoalgebra, CheckResult, dg_vector_space
    from .permutahedra import cobar_f, cobar_g, cobar_h, iota_omega
    from .words import cobar_words

    V = dg_vector_space([("v", 0, {"w": 1}), ("w", 1, {})])
    C1 = CECoalgebra(V, args.n_cap + 1, max_arity=1)
    dOm = cobar_differential(C1)
    sgens = C1.sgens
    ok = True
    where = None
    for r in range(1, min(args.n_cap, 4) + 1):
        for xw in cobar_words(sgens, r):
            v = Vector.unit(xw)
            gf = v.apply(cobar_f).apply(cobar_g)
            hom = v.apply(cobar_h).apply(dOm) + v.apply(dOm).apply(cobar_h)
            if v - gf != hom or v.apply(cobar_h).apply(cobar_f) or v.apply(
                cobar_h
            ).apply(cobar_h):
                ok, where = False, xw
                break
            if v.apply(iota_omega).apply(cobar_h) != v.apply(cobar_h).apply(iota_omega):
                ok, where = False, xw
                break
    return [("theorem1: contraction and involution identities",
             CheckResult(ok, where))]


def _permutahedron_checks(report, n_cap):
    from .linfty import CheckResult

    for n in range(1, n_cap + 1):
        faces = permutahedra.all_faces(n)
        counts = {}
        for f in faces:
            counts[f.d] = counts.get(f.d, 0) + 1
        expected = {d: _stirling(n, d) * _fact(d) for d in range(1, n + 1)}
        report.run("faces[n=%d]" % n,
                   lambda c=counts, e=expected: CheckResult(c == e, (c, e)))
        report.run("boundary_squares[n=%d]" % n, lambda fs=faces: CheckResult(
            all(not permutahedra.boundary(f).apply(permutahedra.boundary) for f in fs)))
        report.run("homology[n=%d]" % n, lambda n=n: CheckResult(
            permutahedra.chain_complex(n).homology_dims() == {0: 1}))
        con = permutahedra.build_contraction(n)
        def identities(fs=faces, con=con):
            for f in fs:
                v = Vector.unit(f)
                lhs = v - con.GF(v)
                rhs = con.H(v).apply(permutahedra.boundary) + con.H(
                    v.apply(permutahedra.boundary))
                if lhs != rhs or con.F(con.H(v)) != 0 or con.H(con.H(v)):
                    return CheckResult(False, f)
            return CheckResult(True)
        report.run("contraction[n=%d]" % n, identities)


def _fact(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _stirling(n, d):
    # second kind, small inputs only
    if d == 0:
        return 1 if n == 0 else 0
    if n == 0:
        return 0
    return d * _stirling(n - 1, d) + _stirling(n - 1, d - 1)


def _tableaux_checks(report, n_cap, dims=(2, 0)):
    from .linfty import CheckResult

    even, odd = dims
    for n in range(1, n_cap + 1):
        def bijection(n=n):
            for shape in tableaux.partitions(n):
                for T in tableaux.standard_tableaux(shape):
                    JT = tableaux.descents(T)
                    import itertools as it

                    merged = set()
                    for size in range(len(JT) + 1):
                        for combo in it.combinations(sorted(JT), size):
                            merged.add(tableaux.column_tableau(T, frozenset(combo)))
                    direct = set()
                    for values in range(1, n + 1):
                        direct.update(tableaux.column_semistandard_fillings(shape, values))
                    own = {m for m in merged}
                    if not own <= direct:
                        return CheckResult(False, T)
            # global bijection: every column-semistandard filling arises once
            for shape in tableaux.partitions(n):
                total = {}
                for T in tableaux.standard_tableaux(shape):
                    JT = tableaux.descents(T)
                    import itertools as it

                    for size in range(len(JT) + 1):
                        for combo in it.combinations(sorted(JT), size):
                            key = tableaux.column_tableau(T, frozenset(combo))
                            total[key] = total.get(key, 0) + 1
                direct = []
                for values in range(1, n + 1):
                    direct.extend(tableaux.column_semistandard_fillings(shape, values))
                if sorted(total) != sorted(direct) or any(v != 1 for v in total.values()):
                    return CheckResult(False, shape)
            return CheckResult(True)

        report.run("tableaux_bijection[n=%d]" % n, bijection)
        report.run("profile[n=%d]" % n,
                   lambda n=n: tableaux.decomposition_dims(n, even, odd)[0])
    return report


def _bgg_suite(args, structure):
    out = []
    out.append(("bgg: twisted cochain equation",
                bgg.generalized_cochain_check(structure)))
    res, dims = bgg.twisted_tensor_acyclicity(
        structure, min(args.weight_cap, 3))
    out.append(("bgg: twisted tensor homology is one point", res))
    M = linfty.adjoint_module(structure.algebra)
    check = linfty.check_module(M, min(args.weight_cap, 3))
    out.append(("bgg: adjoint module valid", check))
    if check:
        out.append(("bgg: round trip", bgg.roundtrip_fg_check(
            M, structure, min(args.arity_cap, 3), min(args.weight_cap, 3))))
    return out


def cmd_permutahedron(args):
    report = Report("permutahedron", _config(args))
    _permutahedron_checks(report, args.n_cap)
    payload = {"face_counts": {}}
    for n in range(1, args.n_cap + 1):
        counts = {}
        for f in permutahedra.all_faces(n):
            counts[f.d] = counts.get(f.d, 0) + 1
        payload["face_counts"][str(n)] = {str(d): counts[d] for d in sorted(counts)}
        payload.setdefault("homology", {})[str(n)] = {
            str(p): v
            for p, v in sorted(permutahedra.chain_complex(n).homology_dims().items())
        }
    return report, payload


def cmd_tableaux(args):
    report = Report("tableaux", _config(args))
    even, odd = args.dim_even, args.dim_odd
    _tableaux_checks(report, args.n_cap, (even, odd))
    payload = {"profiles": {}}
    for n in range(1, args.n_cap + 1):
        _, cobar, tabs = tableaux.decomposition_dims(n, even, odd)
        payload["profiles"][str(n)] = {
            "cobar": {str(k): v for k, v in sorted(cobar.items())},
            "tableaux": {str(k): v for k, v in sorted(tabs.items())},
        }
    return report, payload


def _config(args):
    cfg = {
        "input": args.input,
        "arity_cap": args.arity_cap,
        "weight_cap": args.weight_cap,
        "n_cap": args.n_cap,
        "format": args.format,
    }
    if getattr(args, "suite", None):
        cfg["suite"] = args.suite
    return cfg


def build_parser():
    parser = argparse.ArgumentParser(
        prog="enveloping",
        description="exact universal enveloping of L-infinity algebras",
    )
    parser.add_argument("--input", help="algebra JSON path or bundled:<name>")
    parser.add_argument("--arity-cap", dest="arity_cap", type=int, default=4)
    parser.add_argument("--weight-cap", dest="weight_cap", type=int, default=6)
    parser.add_argument("--n-cap", dest="n_cap", type=int, default=4)
    parser.add_argument("--format", choices=(TEXT, JSON), default=TEXT)
    parser.add_argument("--timings", action="store_true",
                        help="include wall-clock timings in the report")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate")
    sub.add_parser("products")
    check = sub.add_parser("check")
    check.add_argument("--suite", choices=SUITES, default="all")
    sub.add_parser("permutahedron")
    tab = sub.add_parser("tableaux")
    tab.add_argument("--dim-even", type=int, default=2)
    tab.add_argument("--dim-odd", type=int, default=0)
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "products": cmd_products,
    "check": cmd_check,
    "permutahedron": cmd_permutahedron,
    "tableaux": cmd_tableaux,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.arity_cap < 1 or args.weight_cap < 1 or args.n_cap < 1:
        parser.error("caps must be positive")
    try:
        report, payload = COMMANDS[args.command](args)
    except ParseFailure as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 2
    except (RuntimeError, AssertionError) as exc:
        print("internal invariant violation: %s" % exc, file=sys.stderr)
        return 3
    report.emit(args.format, timings=args.timings, payload=payload)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
