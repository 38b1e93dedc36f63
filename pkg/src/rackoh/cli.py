"""Command-line front end and the built-in corpus runner.

Exit codes are a stable contract: 0 success / all checks pass, 1 check
failure (or invalid rack under `verify`), 2 input error, 3 resource error.
JSON output is canonical (sorted keys, two-space indent) so identical
configurations produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from .cochains import (apply_rack_element, chain_isomorphism, differential,
                       differential_prime, invariant_basis,
                       is_invariant_cochain, cochain_product, slice_first)
from .cohomology import (CHECK_BETTI_MN, CHECK_TORSION_PRIMES, RackComplex,
                         CohomologyReport, cohomology_integral,
                         cohomology_over_field, direct_h2, h2_via_group,
                         invariant_cohomology, nonabelian_h2,
                         same_operator_cohomology, semidirect_cocycle_check,
                         twisted_cohomology)
from .errors import InputError, PreconditionError, RackohError, ResourceError
from .linalg import GF, QQ, ZZ, DEFAULT_SNF_BIT_CAP, ExactMatrix
from .modules import (constant_module, jordan_module, module_from_spec,
                      trivial_module, function_module)
from .permutations import DEFAULT_CLOSURE_CAP, inner_group
from .racks import (RackTable, conjugation_rack, cyclic_group_table,
                    cyclic_rack, dihedral_rack, is_quandle, make_semidirect,
                    orbits, rack_from_json, rack_to_json,
                    symmetric_group_table, trivial_rack, verify_rack,
                    verify_yang_baxter)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

# rows*cols ceiling for one differential in corpus jobs; larger degrees are
# skipped for oversized racks (only the semidirect examples are affected)
CORPUS_WORK_CEILING = 6_000_000


def canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# rack and coefficient-group specs


def _builtin_group_table(name: str):
    if name == "S3":
        return symmetric_group_table(3)
    if name.startswith("Z") and name[1:].isdigit():
        k = int(name[1:])
        if k < 1:
            raise InputError("cyclic group size must be >= 1")
        return cyclic_group_table(k)
    raise InputError(f"unknown coefficient group {name!r} (use S3 or Z<k>)")


def parse_rack_spec(spec: str):
    """`kind:param` grammar -> (normalised spec, rack, labels)."""
    if ":" not in spec:
        raise InputError(f"rack spec {spec!r} must look like kind:param")
    kind, _, param = spec.partition(":")
    if kind == "file":
        try:
            with open(param, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read rack file {param}: {exc}")
        except json.JSONDecodeError as exc:
            raise InputError(f"rack file {param} is not valid JSON: {exc}")
        rack, labels = rack_from_json(doc)
        return spec, rack, labels
    if kind in ("trivial", "dihedral", "cyclic"):
        if not param.isdigit():
            raise InputError(f"{kind} rack needs a positive integer size")
        n = int(param)
        builder = {"trivial": trivial_rack, "dihedral": dihedral_rack,
                   "cyclic": cyclic_rack}[kind]
        return f"{kind}:{n}", builder(n), None
    if kind == "conj":
        return spec, conjugation_rack(_builtin_group_table(param)), None
    raise InputError(f"unknown rack kind {kind!r}")


@dataclass
class RunConfig:
    command: str
    rack_spec: str | None = None
    module_path: str | None = None
    ring: str = "Q"
    max_degree: int = 3
    twisted: str | None = None
    coeff: str | None = None
    nonabelian: str | None = None
    invariant: bool = False
    as_json: bool = False
    closure_cap: int = DEFAULT_CLOSURE_CAP
    snf_bit_cap: int = DEFAULT_SNF_BIT_CAP

    def __post_init__(self):
        if self.max_degree < 0:
            raise InputError("max-degree must be >= 0")
        if self.closure_cap <= 0 or self.snf_bit_cap <= 0:
            raise InputError("budget caps must be positive")


def _parse_ring(name: str):
    if name == "Q":
        return QQ
    if name == "Z":
        return ZZ
    if name.startswith("F") and name[1:].isdigit():
        return GF(int(name[1:]))
    raise InputError(f"unknown ring {name!r} (use Q, Z, or F<p>)")


def _parse_twisted(arg: str):
    t, k = Fraction(1), 1
    for piece in arg.split(","):
        key, _, val = piece.partition("=")
        if key == "t":
            t = Fraction(val)
        elif key == "k":
            k = int(val)
        else:
            raise InputError(f"bad twisted parameter {piece!r} (use t=..,k=..)")
    return t, k


# ---------------------------------------------------------------------------
# subcommands


def load_rack_candidate(spec: str):
    """Like parse_rack_spec, but file tables are returned unvalidated so the
    axiom report (not an input error) covers non-racks."""
    kind, _, param = spec.partition(":")
    if kind == "file":
        try:
            with open(param, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read rack file {param}: {exc}")
        except json.JSONDecodeError as exc:
            raise InputError(f"rack file {param} is not valid JSON: {exc}")
        if not isinstance(doc, dict) or not isinstance(doc.get("table"), list):
            raise InputError("rack JSON needs a 'table' list")
        table = [list(row) for row in doc["table"]]
        labels = doc.get("labels")
        return spec, table, labels
    spec, rack, labels = parse_rack_spec(spec)
    return spec, [list(row) for row in rack.table], labels


def cmd_verify(config: RunConfig) -> tuple:
    spec, table, labels = load_rack_candidate(config.rack_spec)
    report = verify_rack(table)  # raises InputError on malformed tables
    doc = {
        "spec": spec,
        "valid": report.valid,
        "violations": [{"axiom": v.axiom, "witness": list(v.witness)}
                       for v in report.violations],
    }
    if report.valid:
        rack = RackTable.from_table(table)
        part = orbits(rack)
        group = inner_group(rack, cap=config.closure_cap)
        doc.update({
            "rack": rack_to_json(rack, labels),
            "quandle": is_quandle(rack),
            "yang_baxter": verify_yang_baxter(rack),
            "orbit_count": part.orbit_count,
            "orbits": [sorted(c) for c in part.classes()],
            "inner_group_order": group.order,
        })
    return (EXIT_OK if report.valid else EXIT_CHECK_FAILED), doc


def _report_exit(report: CohomologyReport) -> int:
    return EXIT_OK if report.all_passed else EXIT_CHECK_FAILED


def cmd_cohomology(config: RunConfig) -> tuple:
    spec, rack, _ = parse_rack_spec(config.rack_spec)
    if config.twisted is not None:
        t, k = _parse_twisted(config.twisted)
        report = twisted_cohomology(rack, t, k, config.max_degree, spec)
        return _report_exit(report), report.to_json_dict()
    if config.module_path is not None:
        with open(config.module_path, "r", encoding="utf-8") as fh:
            module = module_from_spec(rack, json.load(fh))
    else:
        ring = _parse_ring(config.ring)
        module = trivial_module(rack, ring)
    if module.ring == ZZ:
        report = cohomology_integral(rack, config.max_degree, spec,
                                     complex_=RackComplex(
                                         rack, module, spec,
                                         closure_cap=config.closure_cap))
        return _report_exit(report), report.to_json_dict()
    report = cohomology_over_field(rack, module, config.max_degree, spec)
    if config.invariant:
        comparison = invariant_cohomology(rack, module, config.max_degree, spec)
        doc = report.to_json_dict()
        doc["invariant"] = {
            "betti": comparison.invariant_betti,
            "xi_rank": comparison.xi_rank,
            "isomorphism_expected": comparison.isomorphism_expected,
        }
        for check in comparison.report.checks:
            report.checks.append(check)
            doc["checks"].append({"name": check.name, "pass": check.passed,
                                  "details": check.details})
        for note in comparison.report.notes:
            report.notes.append(note)
            doc["notes"].append(note)
        return _report_exit(report), doc
    return _report_exit(report), report.to_json_dict()


def cmd_h2(config: RunConfig) -> tuple:
    spec, rack, _ = parse_rack_spec(config.rack_spec)
    if config.nonabelian is not None:
        table = _builtin_group_table(config.nonabelian)
        result = nonabelian_h2(rack, table)
        doc = {
            "rack": spec,
            "coefficient_group": config.nonabelian,
            "cocycles": result.cocycle_count,
            "classes": result.class_count,
        }
        if config.nonabelian.startswith("Z"):
            # abelian input: cross-check the class count against the
            # linear pipeline
            ab = direct_h2(rack, config.nonabelian)
            order = 1
            for d in ab.torsion:
                order *= d
            match = (ab.free_rank == 0 and result.class_count == order)
            doc["abelian_order"] = order
            doc["match"] = match
            return (EXIT_OK if match else EXIT_CHECK_FAILED), doc
        return EXIT_OK, doc
    coeff = config.coeff or "Q"
    comparison = h2_via_group(rack, coeff, spec)
    return (EXIT_OK if comparison.match else EXIT_CHECK_FAILED,
            comparison.to_json_dict())


# ---------------------------------------------------------------------------
# the built-in corpus and its criteria


@dataclass(frozen=True)
class CheckOutcome:
    rack: str
    name: str
    passed: bool
    details: str = ""


def corpus_racks():
    """The named corpus: trivial 1-4, dihedral 3-6, cyclic 3-5, conj S3."""
    out = []
    for n in (1, 2, 3, 4):
        out.append((f"trivial:{n}", trivial_rack(n)))
    for n in (3, 4, 5, 6):
        out.append((f"dihedral:{n}", dihedral_rack(n)))
    for n in (3, 4, 5):
        out.append((f"cyclic:{n}", cyclic_rack(n)))
    out.append(("conj:S3", conjugation_rack(symmetric_group_table(3))))
    return out


def semidirect_examples():
    """Extension racks the corpus runner exercises alongside the base list."""
    d3 = dihedral_rack(3)
    sign = constant_module(d3, ExactMatrix.from_rows([[-1]], GF(3)))
    t1 = trivial_rack(1)
    return [
        ("sd:dihedral3:F3neg", make_semidirect(d3, sign)),
        ("sd:trivial1:F2", make_semidirect(t1, trivial_module(t1, GF(2)))),
    ]


def _degree_cap(rack: RackTable, module_dim: int, requested: int) -> int:
    """Largest degree whose differential stays under the corpus work ceiling."""
    deg = 0
    size = rack.size
    for n in range(requested + 1):
        if size ** (n + 1) * module_dim * size ** n * module_dim > CORPUS_WORK_CEILING:
            break
        deg = n
    return deg


def criterion_betti(racks, max_degree=3):
    """dim H^n(X, Q) == m^n for all computed degrees."""
    out = []
    for spec, rack in racks:
        deg = _degree_cap(rack, 1, max_degree)
        report = cohomology_over_field(rack, trivial_module(rack, QQ), deg, spec)
        m = orbits(rack).orbit_count
        want = [m ** n for n in range(deg + 1)]
        out.append(CheckOutcome(spec, CHECK_BETTI_MN, report.betti == want,
                                f"betti={report.betti} expected={want}"))
    return out


def criterion_torsion(racks, max_degree=2):
    """Integral torsion primes divide the reduced structure group order."""
    out = []
    for spec, rack in racks:
        deg = _degree_cap(rack, 1, max_degree)
        report = cohomology_integral(rack, deg, spec)
        check = next(c for c in report.checks if c.name == CHECK_TORSION_PRIMES)
        torsion = [list(d.torsion) for d in report.degrees]
        ok = check.passed and report.all_passed
        out.append(CheckOutcome(spec, CHECK_TORSION_PRIMES, ok,
                                f"torsion={torsion} {check.details}"))
    return out


def criterion_invariant_iso(racks, max_degree=3):
    """The inclusion of invariant cochains is a cohomology isomorphism over Q."""
    out = []
    for spec, rack in racks:
        deg = _degree_cap(rack, 1, max_degree)
        comparison = invariant_cohomology(rack, trivial_module(rack, QQ),
                                          deg, spec)
        out.append(CheckOutcome(
            spec, "invariant_map_full_rank", comparison.is_isomorphism,
            f"xi={comparison.xi_rank} inv={comparison.invariant_betti} "
            f"full={comparison.ordinary_betti}"))
    return out


def criterion_twisted(racks, max_degree=3):
    """Vanishing for eigenvalue 2, Jordan blocks k=1..3 at eigenvalue 1,
    and the single-operator formula with diag(1, 2)."""
    out = []
    for spec, rack in racks:
        deg1 = _degree_cap(rack, 1, max_degree)
        report = twisted_cohomology(rack, 2, 1, deg1, spec)
        out.append(CheckOutcome(spec, "twisted_vanishing_t2", report.all_passed,
                                f"betti={report.betti}"))
        for k in (1, 2, 3):
            deg = _degree_cap(rack, k, max_degree)
            report = twisted_cohomology(rack, 1, k, deg, spec)
            out.append(CheckOutcome(spec, f"twisted_jordan_k{k}",
                                    report.all_passed, f"betti={report.betti}"))
        deg2 = _degree_cap(rack, 2, max_degree)
        report = same_operator_cohomology(
            rack, ExactMatrix.from_rows([[1, 0], [0, 2]], QQ), deg2, spec)
        out.append(CheckOutcome(spec, "same_operator_diag_1_2",
                                report.all_passed, f"betti={report.betti}"))
    return out


def criterion_h2(racks, coefficients=("Q", "Z2", "Z3")):
    """Direct degree-2 cohomology equals degree-1 structure-group cohomology."""
    out = []
    for spec, rack in racks:
        for coeff in coefficients:
            comparison = h2_via_group(rack, coeff, spec)
            out.append(CheckOutcome(
                spec, f"h2_group_match_{coeff}", comparison.match,
                f"direct={comparison.direct.describe()} "
                f"group={comparison.via_group.describe()}"))
    return out


def criterion_structural(racks, trials=20):
    """Randomised checks of the exact chain-level identities."""
    out = []
    leibniz_broken_somewhere = False
    for spec, rack in racks:
        rng = random.Random(f"structural:{spec}")
        size = rack.size
        zmod = trivial_module(rack, ZZ)
        zcx = RackComplex(rack, zmod, spec)
        qmod = trivial_module(rack, QQ)
        qcx = RackComplex(rack, qmod, spec)

        def rand_vec(dim, lo=-9, hi=9):
            return [rng.randrange(lo, hi + 1) for _ in range(dim)]

        ok = True
        for _ in range(trials):
            n = rng.randrange(0, 3)
            f = rand_vec(size ** n)
            if any(zcx.diff(n + 1).matvec(zcx.diff(n).matvec(f))):
                ok = False
        out.append(CheckOutcome(spec, "d_squared_zero", ok, f"{trials} instances"))

        ok = True
        for _ in range(trials):
            n = rng.randrange(0, 3)
            y = rng.randrange(size)
            f = rand_vec(size ** n)
            lhs = zcx.diff(n).matvec(apply_rack_element(rack, zmod, n, y, f))
            rhs = apply_rack_element(rack, zmod, n + 1, y, zcx.diff(n).matvec(f))
            if lhs != rhs:
                ok = False
        out.append(CheckOutcome(spec, "action_commutes_with_d", ok,
                                f"{trials} instances"))

        ok = True
        for _ in range(trials):
            n = rng.randrange(1, 3)
            y = rng.randrange(size)
            f = rand_vec(size ** n)
            fy = slice_first(rack, zmod, n, y, f)
            lhs = zcx.diff(n - 1).matvec(fy)
            f_act = apply_rack_element(rack, zmod, n, y, f)
            df_y = slice_first(rack, zmod, n + 1, y, zcx.diff(n).matvec(f))
            rhs = [a - b - c for a, b, c in zip(f, f_act, df_y)]
            if lhs != rhs:
                ok = False
        out.append(CheckOutcome(spec, "first_slot_slice_identity", ok,
                                f"{trials} instances"))

        jmod = jordan_module(rack, 2, 2)
        jcx = RackComplex(rack, jmod, spec)
        iso = {n: chain_isomorphism(rack, jmod, n) for n in range(3)}
        dprime = {n: differential_prime(rack, jmod, n) for n in range(2)}
        ok = True
        for _ in range(trials):
            n = rng.randrange(0, 2)
            f = [Fraction(v) for v in rand_vec(size ** n * 2)]
            lhs = iso[n + 1].matvec(jcx.diff(n).matvec(f))
            rhs = dprime[n].matvec(iso[n].matvec(f))
            if lhs != rhs:
                ok = False
        out.append(CheckOutcome(spec, "chain_iso_intertwines", ok,
                                f"{trials} instances"))

        fun = function_module(rack, QQ)
        gbasis = invariant_basis(rack, fun, 1, via="fixed_space")
        fcx = RackComplex(rack, fun, spec)
        ok = True
        found_violation = False
        for _ in range(trials):
            f = [Fraction(v) for v in rand_vec(size)]
            coeffs = [Fraction(rng.randrange(-3, 4)) for _ in range(gbasis.cols)]
            g = gbasis.matvec(coeffs)
            fg, tensor = cochain_product(rack, qmod, 1, f, fun, 1, g)
            lhs = differential(rack, tensor, 2).matvec(fg)
            df = qcx.diff(1).matvec(f)
            dg = fcx.diff(1).matvec(g)
            dfg, _ = cochain_product(rack, qmod, 2, df, fun, 1, g)
            fdg, _ = cochain_product(rack, qmod, 1, f, fun, 2, dg,
                                     require_invariant=False)
            if lhs != [a - b for a, b in zip(dfg, fdg)]:
                ok = False
            if not found_violation:
                g_bad = [Fraction(rng.randrange(-3, 4)) for _ in range(size * size)]
                if not is_invariant_cochain(rack, fun, 1, g_bad):
                    fg, tensor = cochain_product(rack, qmod, 1, f, fun, 1, g_bad,
                                                 require_invariant=False)
                    lhs = differential(rack, tensor, 2).matvec(fg)
                    dgb = fcx.diff(1).matvec(g_bad)
                    dfg, _ = cochain_product(rack, qmod, 2, df, fun, 1, g_bad,
                                             require_invariant=False)
                    fdg, _ = cochain_product(rack, qmod, 1, f, fun, 2, dgb,
                                             require_invariant=False)
                    if lhs != [a - b for a, b in zip(dfg, fdg)]:
                        found_violation = True
        out.append(CheckOutcome(spec, "leibniz_rule", ok, f"{trials} instances"))
        leibniz_broken_somewhere = leibniz_broken_somewhere or found_violation

        kernels = {n: qcx.kernel_matrix(n) for n in (1, 2)}
        ok = True
        for _ in range(trials):
            n = rng.randrange(1, 3)
            kb = kernels[n]
            if kb.cols == 0:
                continue
            coeffs = [Fraction(rng.randrange(-3, 4)) for _ in range(kb.cols)]
            f = kb.matvec(coeffs)
            y = rng.randrange(size)
            rhs = [a - b for a, b in
                   zip(apply_rack_element(rack, qmod, n, y, f), f)]
            if qcx.diff(n - 1).solve(rhs) is None:
                ok = False
        out.append(CheckOutcome(spec, "cocycle_class_fixed_by_action", ok,
                                f"{trials} instances"))
    out.append(CheckOutcome(
        "corpus", "leibniz_fails_without_invariance", leibniz_broken_somewhere,
        "a non-invariant right factor violated the Leibniz identity"))
    return out


def criterion_semidirect_lemma():
    """Exhaustive 27-function agreement scan for dihedral 3 over F3."""
    from itertools import product as iproduct
    d3 = dihedral_rack(3)
    module = constant_module(d3, ExactMatrix.from_rows([[-1]], GF(3)))
    agree = True
    cocycles = 0
    for vals in iproduct(range(3), repeat=3):
        omega = [(v,) for v in vals]
        is_hom, is_cocycle = semidirect_cocycle_check(d3, module, omega)
        if is_hom != is_cocycle:
            agree = False
        cocycles += is_cocycle
    return [CheckOutcome("dihedral:3", "semidirect_cocycle_lemma", agree,
                         f"27 functions scanned, {cocycles} cocycles")]


def criterion_nonabelian(max_size=2):
    """Abelian Z/3 classes through the brute-force pipeline match the
    linear pipeline's group order, for corpus racks of size <= max_size."""
    out = []
    for spec, rack in corpus_racks():
        if rack.size > max_size:
            continue
        result = nonabelian_h2(rack, cyclic_group_table(3))
        ab = direct_h2(rack, "Z3")
        order = 1
        for d in ab.torsion:
            order *= d
        ok = ab.free_rank == 0 and result.class_count == order
        out.append(CheckOutcome(spec, "nonabelian_matches_abelian_Z3", ok,
                                f"classes={result.class_count} |H2|={order}"))
    return out


def run_corpus(max_degree=3, include_semidirect=True):
    racks = corpus_racks()
    if include_semidirect:
        racks = racks + semidirect_examples()
    outcomes = []
    outcomes += criterion_betti(racks, max_degree)
    outcomes += criterion_torsion(racks, min(max_degree, 2))
    outcomes += criterion_invariant_iso(racks, max_degree)
    outcomes += criterion_twisted(racks, max_degree)
    outcomes += criterion_h2(racks)
    outcomes += criterion_structural(racks)
    outcomes += criterion_semidirect_lemma()
    outcomes += criterion_nonabelian()
    return outcomes


def cmd_corpus(config: RunConfig) -> tuple:
    outcomes = run_corpus(config.max_degree)
    failures = [o for o in outcomes if not o.passed]
    doc = {
        "outcomes": [{"rack": o.rack, "check": o.name, "pass": o.passed,
                      "details": o.details} for o in outcomes],
        "total": len(outcomes),
        "failed": len(failures),
    }
    return (EXIT_OK if not failures else EXIT_CHECK_FAILED), doc


# ---------------------------------------------------------------------------
# output formatting


def _print_human(command: str, doc: dict, out):
    if command == "verify":
        status = "valid rack" if doc["valid"] else "NOT a rack"
        print(f"{doc['spec']}: {status}", file=out)
        if doc["valid"]:
            print(f"  quandle: {doc['quandle']}  yang-baxter: {doc['yang_baxter']}",
                  file=out)
            print(f"  orbits: {doc['orbit_count']} {doc['orbits']}", file=out)
            print(f"  inner group order: {doc['inner_group_order']}", file=out)
        for v in doc["violations"]:
            print(f"  violated {v['axiom']} at witness {tuple(v['witness'])}",
                  file=out)
        return
    if command == "cohomology":
        m = doc["rack"]["orbit_count"]
        print(f"{doc['rack']['spec']}  (m={m})", file=out)
        print("  degree  betti  m^n  torsion", file=out)
        for d in doc["degrees"]:
            print(f"  {d['n']:>6}  {d['betti']:>5}  {m ** d['n']:>3}  "
                  f"{d['torsion'] or '-'}", file=out)
        if "invariant" in doc:
            inv = doc["invariant"]
            print(f"  invariant betti: {inv['betti']}  xi rank: {inv['xi_rank']}",
                  file=out)
        for c in doc["checks"]:
            print(f"  check {c['name']}: {'PASS' if c['pass'] else 'FAIL'}",
                  file=out)
        for note in doc.get("notes", []):
            print(f"  note: {note}", file=out)
        return
    if command == "h2":
        if "classes" in doc:
            print(f"{doc['rack']}: {doc['classes']} classes "
                  f"({doc['cocycles']} cocycles) over {doc['coefficient_group']}",
                  file=out)
            if "match" in doc:
                print(f"  abelian pipeline order {doc['abelian_order']}: "
                      f"{'MATCH' if doc['match'] else 'MISMATCH'}", file=out)
        else:
            print(f"{doc['rack']} with {doc['coefficient']} coefficients", file=out)
            print(f"  direct H2:  free rank {doc['direct_h2']['free_rank']}, "
                  f"torsion {doc['direct_h2']['torsion']}", file=out)
            print(f"  group H1:   free rank {doc['group_h1']['free_rank']}, "
                  f"torsion {doc['group_h1']['torsion']}", file=out)
            print(f"  {'MATCH' if doc['match'] else 'MISMATCH'}", file=out)
        return
    if command == "corpus":
        for o in doc["outcomes"]:
            mark = "PASS" if o["pass"] else "FAIL"
            print(f"{mark}  {o['rack']:<22} {o['check']}", file=out)
        print(f"{doc['total'] - doc['failed']}/{doc['total']} corpus checks passed",
              file=out)
        return
    print(canonical_json(doc), file=out)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rackoh",
        description="exact cohomology workbench for finite racks")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_rack=True):
        if needs_rack:
            p.add_argument("--rack", required=True,
                           help="rack spec: trivial:n, dihedral:n, cyclic:n, "
                                "conj:S3, file:path.json")
        p.add_argument("--json", action="store_true", help="canonical JSON output")
        p.add_argument("--closure-cap", type=int, default=DEFAULT_CLOSURE_CAP)
        p.add_argument("--snf-bit-cap", type=int, default=DEFAULT_SNF_BIT_CAP)

    p = sub.add_parser("verify", help="check the rack axioms and invariants")
    common(p)

    p = sub.add_parser("cohomology", help="betti numbers and torsion")
    common(p)
    p.add_argument("--ring", default="Q", help="Q, Z, or F<p>")
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--twisted", help="t=<rational>,k=<block size> over Q")
    p.add_argument("--module", dest="module_path",
                   help="JSON module spec file overriding --ring")
    p.add_argument("--invariant", action="store_true",
                   help="also compute the invariant subcomplex and xi ranks")

    p = sub.add_parser("h2", help="degree-2 comparisons")
    common(p)
    p.add_argument("--coeff", help="Q, Z, or Z<q> for the group comparison")
    p.add_argument("--nonabelian", help="S3 or Z<k>: brute-force class count")

    p = sub.add_parser("corpus", help="run every theorem check on the corpus")
    common(p, needs_rack=False)
    p.add_argument("--max-degree", type=int, default=3)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"verify": cmd_verify, "cohomology": cmd_cohomology,
                "h2": cmd_h2, "corpus": cmd_corpus}
    try:
        config = RunConfig(
            command=args.command,
            rack_spec=getattr(args, "rack", None),
            module_path=getattr(args, "module_path", None),
            ring=getattr(args, "ring", "Q"),
            max_degree=getattr(args, "max_degree", 3),
            twisted=getattr(args, "twisted", None),
            coeff=getattr(args, "coeff", None),
            nonabelian=getattr(args, "nonabelian", None),
            invariant=getattr(args, "invariant", False),
            as_json=args.json,
            closure_cap=args.closure_cap,
            snf_bit_cap=args.snf_bit_cap,
        )
        code, doc = handlers[args.command](config)
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, PreconditionError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RackohError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if config.as_json:
        sys.stdout.write(canonical_json(doc))
    else:
        _print_human(config.command, doc, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
