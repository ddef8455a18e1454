"""Command-line front end: ``supalg <command> [options]``.

Every command prints one report on stdout (text table, CSV or JSON) and
exits with 0 when all requested checks pass, 1 when a check fails and 2 on
usage errors, including computations refused by an enumeration or complex
size budget.  Budgets are read from the environment variable
SUPALG_BUDGET.  Output never contains timestamps and rows are emitted in a
canonical order, so equal arguments give byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass, field as dc_field
from typing import Any, Callable, Dict, List, Optional, Sequence

from . import __version__
from .groups import PPolynomial, duality_report, group_algebra_Mrfeta, coordinate_Mrfeta
from .hopf import verify_axioms


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Validated arguments shared by all commands."""

    command: str
    p: Optional[int] = None
    r: Optional[int] = None
    s: Optional[int] = None
    m: Optional[int] = None
    n: Optional[int] = None
    f: Optional[str] = None
    eta: Optional[int] = None
    max_degree: Optional[int] = None
    output_format: str = "text"
    seed: int = 0
    extra: Dict[str, Any] = dc_field(default_factory=dict)

    def params(self) -> Dict[str, Any]:
        out = {}
        for key in ("p", "r", "s", "m", "n", "f", "eta", "max_degree"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        out.update(self.extra)
        return out


@dataclass
class Report:
    command: str
    params: Dict[str, Any]
    columns: List[str]
    rows: List[List[Any]]
    passed: bool
    notes: List[str] = dc_field(default_factory=list)
    text_lines: Optional[List[str]] = None

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "params": self.params,
            "columns": self.columns,
            "rows": [dict(zip(self.columns, row)) for row in self.rows],
            "passed": self.passed,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(v, csv_mode=True) for v in row])
        return buf.getvalue().rstrip("\n")

    def to_text(self) -> str:
        header = f"{self.command} " + " ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        lines = [header.rstrip()]
        if self.text_lines is not None:
            lines.extend(self.text_lines)
        else:
            cells = [[_cell(v) for v in row] for row in self.rows]
            widths = [len(c) for c in self.columns]
            for row in cells:
                widths = [max(w, len(c)) for w, c in zip(widths, row)]
            fmt = lambda row: "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
            lines.append(fmt(self.columns))
            lines.extend(fmt(row) for row in cells)
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)

    def render(self, output_format: str) -> str:
        if output_format == "json":
            return self.to_json()
        if output_format == "csv":
            return self.to_csv()
        return self.to_text()


def _cell(value: Any, csv_mode: bool = False) -> str:
    if isinstance(value, bool):
        return "pass" if value else "FAIL"
    if isinstance(value, (list, dict, tuple)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)


# ---------------------------------------------------------------------------
# argument helpers


def _polynomial(config: RunConfig, notes: List[str]) -> PPolynomial:
    """f from --f, or T^{p^s} from --s."""
    p = config.p
    if config.f is not None:
        try:
            f, changed = PPolynomial.parse_with_notice(config.f, p)
        except ValueError as exc:
            raise UsageError(str(exc))
        if changed:
            notes.append(f"note: {config.f} normalised to the monic polynomial {f}")
        return f
    if config.s is not None:
        if config.s < 1:
            raise UsageError("--s must be at least 1")
        return PPolynomial.monomial(p, config.s)
    raise UsageError("give either --s or --f")


def _require(config: RunConfig, *names: str):
    missing = [n for n in names if getattr(config, n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _validate_common(config: RunConfig):
    from .field import is_prime

    if config.p is not None and (not is_prime(config.p) or config.p == 2):
        raise UsageError(f"--p must be an odd prime, got {config.p}")
    for name in ("r", "m", "n", "max_degree"):
        value = getattr(config, name)
        if value is not None and value < 0:
            raise UsageError(f"--{name.replace('_', '-')} must be non-negative")
    if config.r is not None and config.r < 1:
        raise UsageError("--r must be at least 1")
    if config.p is not None and config.eta is not None:
        config.eta %= config.p


# ---------------------------------------------------------------------------
# commands


def cmd_verify_hopf(config: RunConfig) -> Report:
    _require(config, "p", "r")
    notes: List[str] = []
    f = _polynomial(config, notes)
    side = config.extra.get("side", "both")
    algebras = []
    if side in ("group", "both"):
        algebras.append(("group algebra", group_algebra_Mrfeta(config.p, config.r, f, config.eta)))
    if side in ("coordinate", "both"):
        algebras.append(("coordinate algebra", coordinate_Mrfeta(config.p, config.r, f, config.eta)))
    rows = []
    passed = True
    for label, H in algebras:
        report = verify_axioms(H)
        passed = passed and report.passed
        for key, verdict in report.rows():
            rows.append([label, H.dim, key, verdict])
    return Report(config.command, config.params(), ["algebra", "dim", "axiom", "result"], rows, passed, notes)


def cmd_dual_roundtrip(config: RunConfig) -> Report:
    _require(config, "p", "r")
    notes: List[str] = []
    f = _polynomial(config, notes)
    rows = [[name, ok, detail] for name, ok, detail in duality_report(config.p, config.r, f, config.eta)]
    return Report(config.command, config.params(), ["check", "result", "detail"], rows, all(r[1] for r in rows), notes)


def cmd_cohomology(config: RunConfig) -> Report:
    from .cohomology import compare_with_presentation

    _require(config, "p", "r")
    notes: List[str] = []
    f = _polynomial(config, notes)
    max_degree = 3 if config.max_degree is None else config.max_degree
    config.max_degree = max_degree
    comparisons = compare_with_presentation(config.p, config.r, f, config.eta, max_degree)
    rows, lines = [], []
    for c in comparisons:
        row = c.computed
        # [degree, dimension] pairs in increasing degree (JSON object keys would sort as strings)
        internal = [[k, v] for k, v in sorted(row.by_internal_degree.items())]
        expected = [c.expected_total, c.expected_even, c.expected_odd]
        rows.append([row.degree, row.total, row.even, row.odd, internal, expected, c.ok])
        lines.append(
            f"{row.degree}: {row.total}  even={row.even} odd={row.odd}"
            + (" internal=" + ",".join(f"{k}:{v}" for k, v in internal) if internal else "")
            + f"  presentation={c.expected_total} {'match' if c.ok else 'MISMATCH'}"
        )
    columns = ["n", "total", "even", "odd", "by_internal_degree", "presentation", "match"]
    return Report(config.command, config.params(), columns, rows, all(c.ok for c in comparisons), notes, lines)


def cmd_cocycle_check(config: RunConfig) -> Report:
    from .cohomology import induced_map_checks, monomial_independence, ring_relation_checks

    _require(config, "p", "r", "s")
    if config.s < 1:
        raise UsageError("--s must be at least 1")
    max_degree = 3 if config.max_degree is None else config.max_degree
    config.max_degree = max_degree
    rows = [["ring", name, ok] for name, ok in ring_relation_checks(config.p, config.r, config.s)]
    rows += [["pullback", name, ok] for name, ok in induced_map_checks(config.p, config.r, config.s)]
    for n, count, rank, dim in monomial_independence(config.p, config.r, config.s, max_degree):
        rows.append(["independence", f"degree {n}: {count} monomials, rank {rank}, dim H^{n} = {dim}", count == rank == dim])
    return Report(config.command, config.params(), ["group", "check", "result"], rows, all(r[2] for r in rows))


def cmd_boundary_check(config: RunConfig) -> Report:
    from .cohomology import boundary_filtration_check

    _require(config, "p", "f")
    notes: List[str] = []
    f = _polynomial(config, notes)
    if f.t < 2:
        raise UsageError("the boundary check needs t >= 2")
    result = boundary_filtration_check(config.p, f, config.eta)
    level = "zero" if result.remainder_level is None and config.output_format != "json" else result.remainder_level
    rows = [[str(f), config.eta, level, result.required_level, result.remainder_terms, result.passed]]
    columns = ["f", "eta", "remainder_level", "required_level", "remainder_terms", "result"]
    return Report(config.command, config.params(), columns, rows, result.passed, notes)


def _points(config: RunConfig, notes: List[str]):
    from .varieties import enumerate_Vr, enumerate_Vrfeta

    _require(config, "m", "n", "r", "p")
    if config.m + config.n == 0:
        raise UsageError("need m + n > 0")
    force = config.extra.get("force", False)
    if config.f is None and config.s is None:
        if config.eta:
            raise UsageError("--eta needs --f or --s")
        return None, enumerate_Vr(config.m, config.n, config.r, config.p, force=force)
    f = _polynomial(config, notes)
    return f, enumerate_Vrfeta(config.m, config.n, config.r, config.p, f, config.eta, force=force)


def cmd_enumerate_points(config: RunConfig) -> Report:
    from .varieties import point_to_module

    notes: List[str] = []
    f, points = _points(config, notes)
    check_modules = config.extra.get("check_modules", False)
    if check_modules and f is None:
        raise UsageError("--check-modules needs --f or --s")
    rows, passed = [], True
    for index, pt in enumerate(points):
        data = pt.to_json()
        row = [index, data["alphas"], data["beta"]]
        if check_modules:
            ok = point_to_module(pt, f, config.eta).verified
            passed = passed and ok
            row.append(ok)
        rows.append(row)
    columns = ["index", "alphas", "beta"] + (["module"] if check_modules else [])
    notes.append(f"{len(points)} points")
    return Report(config.command, config.params(), columns, rows, passed, notes)


def cmd_endos(config: RunConfig) -> Report:
    from .varieties import enumerate_endos, parametrised_endomorphisms

    _require(config, "p", "r", "s")
    if config.s < 1:
        raise UsageError("--s must be at least 1")
    found = {e.key(): e for e in enumerate_endos(config.p, config.r, config.s)}
    expected = {e.key(): e for e in parametrised_endomorphisms(config.p, config.r, config.s)}
    rows = []
    for key in sorted(set(found) | set(expected)):
        e = found.get(key) or expected[key]
        rows.append([e.mu, list(e.a), e.b, key in found, key in expected])
    passed = set(found) == set(expected) and all(
        (found[k].matrix % config.p == expected[k].matrix % config.p).all() for k in found
    )
    notes = [f"{len(found)} endomorphisms found by search, {len(expected)} from the parametrisation"]
    return Report(config.command, config.params(), ["mu", "a", "b", "found", "parametrised"], rows, passed, notes)


def cmd_covering_check(config: RunConfig) -> Report:
    from .varieties import covering_check

    _require(config, "m", "n", "r", "p")
    max_t = config.extra.get("max_t", 3)
    report = covering_check(config.m, config.n, config.r, config.p, max_t, force=config.extra.get("force", False))
    rows = []
    for pt, f in report.rows:
        rows.append([list(pt.entries()), str(f) if f is not None else "none"])
    rows.append(["frobenius twist is a bijection", report.twist_is_bijection])
    rows.append(["frobenius twist is the identity", report.twist_is_identity])
    return Report(config.command, config.params(), ["point", "annihilating_polynomial"], rows, report.passed)


def cmd_charclass_check(config: RunConfig) -> Report:
    from .classring import restriction_multiplicativity, theta_check, verify_relations_at_point

    notes: List[str] = []
    f, points = _points(config, notes)
    if f is None:
        raise UsageError("charclass-check needs --f or --s")
    relation = config.extra.get("relation", "all")
    sample = config.extra.get("sample")
    if sample is not None and sample < len(points):
        chosen = sorted(random.Random(config.seed).sample(range(len(points)), sample))
        points = [points[i] for i in chosen]
    rows, passed = [], True
    for pt in points:
        checks = []
        if relation != "theta":
            groups = "all" if relation in ("all", "restriction") else relation
            if relation != "restriction":
                report = verify_relations_at_point(pt, f, config.eta, groups)
                checks.append(("relations", report.passed, report.failures()))
        if relation in ("all", "theta"):
            th = theta_check(pt, f, config.eta)
            checks.append(("theta", th.passed, [m[0] for m in th.mismatches]))
        if relation in ("all", "restriction"):
            rm = restriction_multiplicativity(pt, f, config.eta)
            bad = [f"{a}*{b}" for a, b, ok in rm if not ok]
            checks.append(("restriction", not bad, bad))
        for name, ok, failures in checks:
            passed = passed and ok
            rows.append([list(pt.entries()), name, ok, failures])
    notes.append(f"{len(points)} points checked")
    return Report(config.command, config.params(), ["point", "check", "result", "failures"], rows, passed, notes)


def cmd_ext_table(config: RunConfig) -> Report:
    from .classring import (
        DegreeOverflow,
        ExtModel,
        counit_checks,
        delta_is_multiplicative,
        delta_multiplicativity_pairs,
        ext_coproduct,
        ext_key_str,
        pi_symmetry_check,
    )

    _require(config, "p", "r")
    model = ExtModel(config.p, config.r, config.max_degree)
    config.max_degree = model.max_degree
    rows = []
    basis = model.basis()
    for key in basis:
        rows.append(["basis", ext_key_str(key), model.degree(key), ""])
    for a in basis:
        for b in basis:
            try:
                prod = model.multiply_basis(a, b)
            except DegreeOverflow:
                continue
            for k, c in sorted(prod.items()):
                rows.append(["product", f"{ext_key_str(a)} * {ext_key_str(b)}", model.degree(k), f"{c}*{ext_key_str(k)}"])
    specified = [k for k in basis if model.coproduct_specified(k)]
    for key in specified:
        delta = ext_coproduct(key, model)
        text = " + ".join(
            (f"{c}*" if c != 1 else "") + f"{ext_key_str(x)} (x) {ext_key_str(y)}" for (x, y), c in sorted(delta.items())
        )
        rows.append(["coproduct", ext_key_str(key), model.degree(key), text])
    checks = []
    pairs = delta_multiplicativity_pairs(model)
    checks.append(("coproduct multiplicative below degree 2p^r", all(delta_is_multiplicative(model, a, b) for a, b in pairs)))
    checks.append(("counit laws", all(all(counit_checks(model, k)) for k in specified)))
    checks.append(("Pi symmetry of the coproduct", all(pi_symmetry_check(model, k) for k in specified)))
    e0, eP0 = model.basis_element("e", 0), model.basis_element("eP", 0)
    checks.append(("e0 and ePi0 are orthogonal idempotents", e0 * e0 == e0 and eP0 * eP0 == eP0 and (e0 * eP0).is_zero() and (eP0 * e0).is_zero()))
    unit = model.unit()
    checks.append(("e0 + ePi0 is the unit", all(unit * model.basis_element(*k) == model.basis_element(*k) == model.basis_element(*k) * unit for k in basis)))
    for name, ok in checks:
        rows.append(["check", name, "", ok])
    return Report(config.command, config.params(), ["section", "item", "degree", "value"], rows, all(ok for _, ok in checks))


COMMANDS: Dict[str, Callable[[RunConfig], Report]] = {
    "verify-hopf": cmd_verify_hopf,
    "dual-roundtrip": cmd_dual_roundtrip,
    "cohomology": cmd_cohomology,
    "cocycle-check": cmd_cocycle_check,
    "boundary-check": cmd_boundary_check,
    "enumerate-points": cmd_enumerate_points,
    "endos": cmd_endos,
    "covering-check": cmd_covering_check,
    "charclass-check": cmd_charclass_check,
    "ext-table": cmd_ext_table,
}


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="supalg", description="Computations with multiparameter supergroups over F_p.")
    parser.add_argument("--version", action="version", version=f"supalg {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name: str, help_text: str, options: Sequence[str]) -> argparse.ArgumentParser:
        cmd = sub.add_parser(name, help=help_text, description=help_text)
        for opt in options:
            if opt == "f":
                cmd.add_argument("--f", help="p-polynomial such as 'T^9+2T^3'")
            elif opt == "eta":
                cmd.add_argument("--eta", type=int, default=0, help="scalar eta (reduced mod p, default 0)")
            elif opt == "max-degree":
                cmd.add_argument("--max-degree", type=int, default=None, help="largest degree to compute")
            else:
                cmd.add_argument(f"--{opt}", type=int, default=None)
        cmd.add_argument("--format", dest="output_format", choices=["text", "csv", "json"], default="text")
        cmd.add_argument("--seed", type=int, default=0, help="seed for sampled sweeps (default 0)")
        return cmd

    group_opts = ["p", "r", "s", "f", "eta"]
    verify = add("verify-hopf", "check the Hopf superalgebra axioms of kM_{r;f,eta} and k[M_{r;f,eta}]", group_opts)
    verify.add_argument("--side", choices=["group", "coordinate", "both"], default="both")
    add("dual-roundtrip", "compare the group algebra, its dual and the coordinate algebra", group_opts)
    add("cohomology", "Betti numbers of M_{r;f,eta} against its presentation", group_opts + ["max-degree"])
    add("cocycle-check", "named cocycles, ring relations and pullback identities for M_{r;s}", ["p", "r", "s", "max-degree"])
    add("boundary-check", "boundary of sigma_p modulo the augmentation filtration (r = 1)", ["p", "f", "eta"])
    point_opts = ["m", "n", "r", "p", "s", "f", "eta"]
    enum = add("enumerate-points", "list the F_p-points of V_r(GL_{m|n}) or V_{r;f,eta}(GL_{m|n})", point_opts)
    enum.add_argument("--check-modules", action="store_true", help="verify the module attached to each point")
    enum.add_argument("--force", action="store_true", help="ignore the enumeration budget")
    add("endos", "endomorphisms of M_{r;s} by search and by parametrisation", ["p", "r", "s"])
    cover = add("covering-check", "every point of V_r lies in some V_{r;f,eta}", ["m", "n", "r", "p"])
    cover.add_argument("--max-t", type=int, default=3)
    cover.add_argument("--force", action="store_true", help="ignore the enumeration budget")
    charclass = add("charclass-check", "characteristic class relations and the theta check at every point", point_opts)
    charclass.add_argument(
        "--relation",
        choices=["all", "er-p", "nilpotent", "twist", "commute", "theta", "restriction"],
        default="all",
    )
    charclass.add_argument("--sample", type=int, default=None, help="check a seeded random sample of points")
    charclass.add_argument("--force", action="store_true", help="ignore the enumeration budget")
    add("ext-table", "basis, products and coproducts of the Ext model", ["p", "r", "max-degree"])
    return parser


EXTRA_KEYS = ("side", "check_modules", "force", "max_t", "relation", "sample")


def parse_config(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(argv)
    values = vars(args)
    config = RunConfig(
        command=args.command,
        p=values.get("p"),
        r=values.get("r"),
        s=values.get("s"),
        m=values.get("m"),
        n=values.get("n"),
        f=values.get("f"),
        eta=values.get("eta"),
        max_degree=values.get("max_degree"),
        output_format=args.output_format,
        seed=args.seed,
    )
    for key in EXTRA_KEYS:
        if values.get(key) not in (None, False):
            config.extra[key] = values[key]
    if config.s is not None and config.f is not None:
        raise UsageError("give only one of --s and --f")
    _validate_common(config)
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    from .cohomology import BudgetExceeded as ComplexBudget
    from .varieties import BudgetExceeded as EnumerationBudget

    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = parse_config(argv)
        report = COMMANDS[config.command](config)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ComplexBudget, EnumerationBudget) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for note in report.notes:
        print(note, file=sys.stderr)
    print(report.render(config.output_format))
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
