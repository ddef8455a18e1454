"""Acceptance suite: one check per numbered criterion, each printing a PASS/FAIL line.

Run under pytest (``pytest tests/test_acceptance.py -v -s``) or directly with
``python3 tests/test_acceptance.py``.
"""

import sys
import time

import pytest

from supalg.classring import (
    ExtModel,
    counit_checks,
    delta_is_multiplicative,
    delta_multiplicativity_pairs,
    pi_symmetry_check,
    restriction_multiplicativity,
    theta_check,
    verify_relations_at_point,
)
from supalg.cohomology import (
    boundary_filtration_check,
    compare_with_presentation,
    induced_map_checks,
    ring_relation_checks,
)
from supalg.groups import (
    PPolynomial,
    all_monic_inseparable,
    coordinate_Mrs,
    duality_report,
    group_algebra_Mrfeta,
    group_algebra_Mrs,
)
from supalg.hopf import verify_axioms
from supalg.varieties import (
    annihilating_p_polynomial,
    covering_check,
    enumerate_endos,
    enumerate_Vrfeta,
    parametrised_endomorphisms,
    point_to_module,
)

P = 3
GRID = [(p, r, s) for p in (3, 5) for r in (1, 2) for s in (1, 2)]


def T(p, exponent_text):
    return PPolynomial.parse(exponent_text, p)


def _sweep():
    """(point, f, eta) for every point of the relation sweep over GL_{1|1}(F_3)."""
    out = []
    for r in (1, 2):
        for text in ("T^3", "T^9", "T^9+T^3"):
            f = T(P, text)
            out.extend((pt, f, 0) for pt in enumerate_Vrfeta(1, 1, r, P, f, 0))
    for eta in (1, 2):
        f = T(P, "T^3")
        out.extend((pt, f, eta) for pt in enumerate_Vrfeta(1, 1, 2, P, f, eta))
    return out


# ---------------------------------------------------------------------------
# the ten checks; each returns (passed, detail)


def hopf_axiom_suite():
    failures = []
    count = 0
    for p, r, s in GRID:
        for H in (coordinate_Mrs(p, r, s), group_algebra_Mrs(p, r, s)):
            count += 1
            if not verify_axioms(H).passed:
                failures.append(H.name)
    for f in all_monic_inseparable(P, 2):
        for r in (1, 2):
            for eta in range(P):
                count += 1
                H = group_algebra_Mrfeta(P, r, f, eta)
                if not verify_axioms(H).passed:
                    failures.append(H.name)
    return not failures, f"{count} algebras, failures: {failures or 'none'}"


def duality():
    failures = []
    count = 0
    for p, r, s in GRID:
        for name, ok, _ in duality_report(p, r, PPolynomial.monomial(p, s), 0):
            count += 1
            if not ok:
                failures.append((p, r, s, name))
    for f in all_monic_inseparable(P, 2):
        for eta in range(P):
            for name, ok, detail in duality_report(P, 1, f, eta):
                count += 1
                if not ok:
                    failures.append((str(f), eta, name, detail))
    return not failures, f"{count} checks, failures: {failures or 'none'}"


def cohomology_dimensions():
    cases = [
        ("M_{1;1}", 1, "T^3", 0, 4, [1, 2, 3, 4, 5]),
        ("M_{1;2}", 1, "T^9", 0, 3, [1, 2, 3, 4]),
        ("M_{2;1}", 2, "T^3", 0, 3, None),
        ("M_{1;T^3,1}", 1, "T^3", 1, 5, [1] * 6),
        ("M_{1;T^3,2}", 1, "T^3", 2, 5, [1] * 6),
    ]
    failures = []
    summary = []
    for label, r, text, eta, top, totals in cases:
        rows = compare_with_presentation(P, r, T(P, text), eta, top)
        got = [row.computed.total for row in rows]
        summary.append(f"{label}: {got}")
        if not all(row.ok for row in rows):
            failures.append(f"{label} disagrees with its presentation")
        if totals is not None and got != totals:
            failures.append(f"{label} totals {got} != {totals}")
    return not failures, "; ".join(summary) + (f"; failures: {failures}" if failures else "")


def cocycle_suite():
    failures = []
    count = 0
    for r, s in ((1, 1), (1, 2), (2, 1)):
        for name, ok in ring_relation_checks(P, r, s) + induced_map_checks(P, r, s):
            count += 1
            if not ok:
                failures.append((r, s, name))
    names = [name for name, _ in induced_map_checks(P, 1, 1)]
    if "pi*(w1) = x1 - y^2" not in names:
        failures.append("the pullback of w1 at r = 1 was not compared with x1 - y^2")
    return not failures, f"{count} identities, failures: {failures or 'none'}"


def boundary_filtration():
    failures = []
    polys = [f for f in all_monic_inseparable(P, 2) if f.t == 2]
    for f in polys:
        for eta in range(P):
            result = boundary_filtration_check(P, f, eta)
            if not result.passed:
                failures.append((str(f), eta, result.remainder_level))
    return not failures, f"{len(polys) * P} cases, failures: {failures or 'none'}"


def enumeration_counts():
    f = T(P, "T^3")
    v1 = enumerate_Vrfeta(1, 1, 1, P)
    v1f = enumerate_Vrfeta(1, 1, 1, P, f, 0)
    endo11 = enumerate_endos(P, 1, 1)
    endo12 = enumerate_endos(P, 1, 2)
    counts = (len(v1), len(v1f), len(endo11), len(endo12))
    modules_ok = all(point_to_module(pt, f, 0).verified for pt in v1f)
    for pt in v1:
        g = annihilating_p_polynomial(pt.alphas[0], P, 3)
        modules_ok = modules_ok and g is not None and point_to_module(pt, g, 0).verified
    same_as_family = all(
        {e.key() for e in enumerate_endos(P, 1, s)} == {e.key() for e in parametrised_endomorphisms(P, 1, s)} for s in (1, 2)
    )
    ok = counts == (9, 5, 9, 9) and modules_ok and same_as_family
    return ok, f"counts {counts} (expected (9, 5, 9, 9)), modules verified: {modules_ok}, parametrisation agrees: {same_as_family}"


def covering():
    failures = []
    for m, n, r, p in ((1, 1, 1, 3), (1, 1, 2, 3), (2, 0, 1, 3)):
        report = covering_check(m, n, r, p, 3)
        if not report.passed:
            failures.append((m, n, r, p))
    return not failures, f"failures: {failures or 'none'}"


def characteristic_class_relations(sweep):
    failures = []
    for pt, f, eta in sweep:
        report = verify_relations_at_point(pt, f, eta)
        if not report.passed:
            failures.append((pt.entries(), str(f), eta, report.failures()))
    return not failures, f"{len(sweep)} points, failures: {failures or 'none'}"


def theta_pointwise(sweep):
    failures = []
    compared = 0
    for pt, f, eta in sweep:
        report = theta_check(pt, f, eta)
        compared += report.compared
        if not report.passed:
            failures.append((pt.entries(), str(f), eta, report.mismatches))
    return not failures, f"{len(sweep)} points, {compared} coordinate values, failures: {failures or 'none'}"


def ext_model(sweep):
    failures = []
    for r in (1, 2):
        model = ExtModel(P, r)
        specified = [k for k in model.basis() if model.coproduct_specified(k) and model.degree(k) < 2 * model.q]
        if not all(delta_is_multiplicative(model, a, b) for a, b in delta_multiplicativity_pairs(model)):
            failures.append((r, "coproduct not multiplicative"))
        if not all(all(counit_checks(model, k)) for k in specified):
            failures.append((r, "counit"))
        if not all(pi_symmetry_check(model, k) for k in specified):
            failures.append((r, "Pi symmetry"))
        e0, eP0 = model.basis_element("e", 0), model.basis_element("eP", 0)
        if not (e0 * e0 == e0 and eP0 * eP0 == eP0 and (e0 * eP0).is_zero() and (eP0 * e0).is_zero()):
            failures.append((r, "idempotents"))
        unit = model.unit()
        for k in model.basis():
            if model.degree(k) < 2 * model.q:
                x = model.basis_element(*k)
                if not (unit * x == x == x * unit):
                    failures.append((r, "unit", k))
    bad_points = 0
    for pt, f, eta in sweep:
        if not all(ok for _, _, ok in restriction_multiplicativity(pt, f, eta)):
            bad_points += 1
    if bad_points:
        failures.append(f"restriction fails at {bad_points} points")
    return not failures, f"failures: {failures or 'none'}"


# ---------------------------------------------------------------------------
# drivers

CHECKS = [
    (1, "Hopf axiom suite", hopf_axiom_suite, False),
    (2, "duality", duality, False),
    (3, "cohomology dimensions", cohomology_dimensions, False),
    (4, "cocycle suite", cocycle_suite, False),
    (5, "boundary filtration", boundary_filtration, False),
    (6, "enumeration counts", enumeration_counts, False),
    (7, "covering", covering, False),
    (8, "characteristic-class relations", characteristic_class_relations, True),
    (9, "theta pointwise", theta_pointwise, True),
    (10, "Ext model", ext_model, True),
]


def run_check(number, title, check, needs_sweep, sweep=None):
    start = time.perf_counter()
    ok, detail = check(sweep) if needs_sweep else check()
    elapsed = time.perf_counter() - start
    line = f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title} ({elapsed:.1f}s): {detail}"
    return ok, line


@pytest.fixture(scope="module")
def sweep():
    return _sweep()


@pytest.mark.parametrize("number,title,check,needs_sweep", CHECKS, ids=[f"criterion_{c[0]:02d}" for c in CHECKS])
def test_acceptance_criterion(number, title, check, needs_sweep, request, capsys):
    data = request.getfixturevalue("sweep") if needs_sweep else None
    ok, line = run_check(number, title, check, needs_sweep, data)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def main() -> int:
    data = _sweep()
    results = []
    for number, title, check, needs_sweep in CHECKS:
        ok, line = run_check(number, title, check, needs_sweep, data)
        print(line, flush=True)
        results.append(ok)
    print(f"{sum(results)}/{len(results)} criteria pass")
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
