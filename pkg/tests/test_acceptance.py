"""Acceptance criteria, one test each.

Every criterion is a function returning ``(ok, detail)``; the tests assert on
``ok`` and record a one-line verdict that the terminal summary prints.  Running
this file directly prints the same lines without pytest.
"""

from __future__ import annotations

import sys
from fractions import Fraction as F

import pytest

from virteuler import exact, genfunc, onept, oracle, tr

RESULTS: dict[int, tuple[bool, str]] = {}


def _all(checks):
    bad = [name for name, ok in checks if not ok]
    return not bad, ("all sub-checks hold" if not bad else "failed: " + ", ".join(bad))


def criterion_1():
    report = exact.bernoulli_check(30)
    return report.passed, f"B_2..B_10 and generator identity to order 30 ({len(report.records)} checks)"


def criterion_2():
    report = genfunc.reconcile_conventions("gaussian", 6, 8, strict=False)
    spots = [
        ("closed(1,1)", genfunc.kappa_closed_gaussian(1, 1) == F(-1, 12)),
        ("closed(2,1)", genfunc.kappa_closed_gaussian(2, 1) == F(1, 120)),
        ("closed(0,3)", genfunc.kappa_closed_gaussian(0, 3) == F(1, 6)),
    ]
    ok, detail = _all(spots + [("reconcile", report.passed)])
    return ok, f"{len(report.records)} (g,s) ratios; {detail}"


def criterion_3():
    sw = genfunc.kappa_sw_route(genfunc.legendre_genus_terms(4), 1)
    sw_vals = [sw.entries[(2 * g, 1)] for g in range(1, 5)]
    sums = [onept.kappa_g1_sum(g) for g in range(1, 5)]
    stated = [genfunc.kappa_legendre_stated(g) for g in range(1, 5)]
    return _all([
        ("sw values", sw_vals == [F(1, 4), F(-1, 32), F(1, 64), F(-17, 1024)]),
        ("stated = -sw", all(a == -b for a, b in zip(stated, sw_vals))),
        ("sums verbatim", sums == [F(-1, 2), F(1, 16), F(-1, 32), F(17, 512)]),
        ("sums = -2 sw", all(a == -2 * b for a, b in zip(sums, sw_vals))),
    ])


def criterion_4():
    ode = onept.ode_series_solve(6, 16)
    rec = onept.f_table("corrected", 6, 16)
    moments = all(oracle.moments_exact("legendre", 1, N) == 2 * N - F(2 * N, 4 * N * N - 1)
                  for N in range(1, 51))
    small = onept.ode_series_solve(2, 4)
    extract = all(oracle.genus_extract("legendre", k, 2)[g] == small.eps[(g, k)]
                  for k in range(5) for g in range(3))
    return _all([
        ("ode == corrected recursion", ode.f == rec.f),
        ("eps_1 row", ode.row(1)[1:4] == [F(-1, 2), -3, -15] and rec.row(1)[1:4] == [F(-1, 2), -3, -15]),
        ("eps_2(1)", ode.eps[(2, 1)] == F(-1, 8) == rec.eps[(2, 1)]),
        ("<tr M^2> N<=50", moments),
        ("genus_extract g<=2 k<=4", extract),
    ])


def criterion_5():
    table = onept.kappa_n_table(12)
    cross = all(v == table.r[key] * onept.u_integral(key[1]) for key, v in table.kappa.items())
    return _all([
        ("r endpoints / top / integrality", onept.r_endpoint_checks(12, strict=False).passed),
        ("kappa_n vs r * u_integral", cross),
        ("normalization ratio -1/2", onept.normalization_ratio_check(4, 8, strict=False).passed),
    ])


def criterion_6():
    part = oracle.partition_identity_check(30, tuple(range(11)), 20, strict=False)
    gauss = genfunc.barnes_numeric_check("gaussian", 20, 5)
    leg = genfunc.barnes_numeric_check("legendre", 20, 5)
    return _all([
        ("Z_Leg N<=30 and Laguerre a<=10 N<=20", part.passed),
        ("Barnes numeric gaussian", gauss.passed),
        ("Barnes numeric legendre", leg.passed),
    ])


def criterion_7():
    report = oracle.appendix_ode_check(8, 8, 6, strict=False)
    q4 = [r for r in report.records if r["where"][0] == "Q4"]
    five = [r for r in report.records if r["where"][0] == "five_term"]
    return _all([
        ("Q-4 for N<=8", len(q4) == 8 and all(r["ok"] for r in q4)),
        ("third-order ODE N<=6 k<=8", len(five) == 6 and all(r["ok"] for r in five)),
        ("all appendix identities", report.passed),
    ])


def criterion_8():
    leg = tr.sw_chain_check("legendre", 3)
    gue = tr.sw_chain_check("gue", 2)
    leg_curve, gue_curve = tr.curve_preset("legendre"), tr.curve_preset("gue")
    o = leg.meta["orientation"]
    values = ([tr.sw_t0_integral(leg_curve, g, o) for g in (1, 2, 3)] == [F(1, 4), F(-1, 32), F(1, 64)]
              and [tr.sw_t0_integral(gue_curve, g, o) for g in (1, 2)] == [F(1, 12), F(-1, 120)])
    return _all([
        ("calibrated legendre chain", leg.passed),
        ("gue chain, no extra freedom", gue.passed),
        ("values", values),
        ("legendre properties", tr.tr_property_checks("legendre", 2).passed),
        ("gue properties", tr.tr_property_checks("gue", 2).passed),
    ])


def criterion_9():
    report = genfunc.goe_shift_identity_check(9, 8)
    return _all([
        ("shift identity 2g<=9 s<=8", report.passed),
        ("kappa(1/2,2)", genfunc.kappa_goe_nonorientable(F(1, 2), 2) == F(1, 4)),
        ("kappa(1/2,3)", genfunc.kappa_goe_nonorientable(F(1, 2), 3) == F(-1, 12)),
        ("odd t0 support", all(m % 2 for m in genfunc.goe_phi(4).powers)),
    ])


def criterion_10():
    from click.testing import CliRunner

    from virteuler.cli import cli

    printed = onept.five_term_oracle_check("printed", 2, 4)
    f11 = onept.f_table("printed", 1, 1).f[(1, 1)]
    eps11 = onept.f_table("printed", 1, 1).eps[(1, 1)]
    top = onept.printed_top_formula_check(12)
    result = CliRunner().invoke(cli, ["verify", "--variant", "printed", "--format", "csv"])
    statuses = dict(line.split(",")[:2] for line in result.output.splitlines() if "," in line)
    return _all([
        ("printed f_1(1) = +1/2", f11 == F(1, 2)),
        ("printed eps_1(1) = +1 vs oracle -1/2",
         eps11 == 1 and oracle.genus_extract("legendre", 1, 1)[1] == F(-1, 2)),
        ("printed five-term expected-mismatch", printed.status == "expected-mismatch"),
        ("r-top ratio exactly 2", top.status == "expected-mismatch"
         and set(top.meta["ratios"].values()) == {"2"}),
        ("verify --variant printed exits 0", result.exit_code == 0),
        ("verify reports both as expected-mismatch",
         statuses.get("documented[printed_r_top]") == "expected-mismatch"
         and statuses.get("five_term_vs_oracle") == "expected-mismatch"),
    ])


CRITERIA = {
    1: ("Bernoulli table and generator identity", criterion_1),
    2: ("Gaussian reconciliation", criterion_2),
    3: ("Legendre kappa chain", criterion_3),
    4: ("One-point consistency", criterion_4),
    5: ("u-basis tables and normalization", criterion_5),
    6: ("Partition identities and Barnes numeric check", criterion_6),
    7: ("Differential identities on finite-N data", criterion_7),
    8: ("Topological recursion to SW chain", criterion_8),
    9: ("GOE non-orientable series", criterion_9),
    10: ("Documented discrepancies", criterion_10),
}


def verdict(n: int) -> str:
    ok, detail = RESULTS[n]
    return f"criterion {n:>2} [{'PASS' if ok else 'FAIL'}] {CRITERIA[n][0]}: {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    try:
        ok, detail = CRITERIA[n][1]()
    except Exception as exc:  # recorded, then re-raised for pytest
        RESULTS[n] = (False, f"{type(exc).__name__}: {exc}")
        print(verdict(n))
        raise
    RESULTS[n] = (ok, detail)
    print(verdict(n))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n, (_, fn) in sorted(CRITERIA.items()):
        try:
            RESULTS[n] = fn()
        except Exception as exc:
            RESULTS[n] = (False, f"{type(exc).__name__}: {exc}")
        failed += not RESULTS[n][0]
        print(verdict(n))
    sys.exit(1 if failed else 0)
