"""Acceptance criteria 1-11.

Each test prints one line ``criterion N: PASS|FAIL ...`` with its runtime and
the pinned bound.  Every comparison is exact (normal-form equality over F_p,
Q or the truncated coefficient ring); the only tolerances are wall-clock
bounds.  Run directly with ``python tests/test_acceptance.py`` for the lines
alone.
"""

from __future__ import annotations

import contextlib
import itertools
import time

import pytest

from hopfsmith import cartan_algebras as ca
from hopfsmith import quantized_hopf as qh
from hopfsmith.combinatorics import (
    check_identity_suite,
    grunspan_integral,
    rising_poly,
    stirling_by_enumeration,
    stirling_c,
)
from hopfsmith.errors import NonIntegral
from hopfsmith.twist_engine import (
    TwistSpec,
    build_F,
    build_Finv,
    catalogue,
    check_twist_axiom,
    jordanian_equivalence,
    zeta_chain,
)

# wall-clock bounds in seconds
BOUNDS = {1: 1.0, 2: 120.0, 3: 10.0, 4: 30.0, 5: 600.0, 6: 900.0, 7: 900.0,
          8: 120.0, 9: 120.0, 10: 60.0, 11: 300.0}

V12 = TwistSpec.vertical(1, 2)
H123 = TwistSpec.horizontal(1, 2, 3)
# F(1,2)F(3,2): a product satisfying i not in {k, m} and j != k
PROD = TwistSpec.product(TwistSpec.vertical(1, 2), TwistSpec.vertical(3, 2))


@contextlib.contextmanager
def _visible(capsys):
    if capsys is None:
        yield
    else:
        with capsys.disabled():
            yield


def report(capsys, n: int, ok: bool, elapsed: float, detail: str):
    bound = BOUNDS[n]
    in_time = elapsed <= bound
    status = "PASS" if ok and in_time else "FAIL"
    with _visible(capsys):
        print(f"\ncriterion {n}: {status} ({elapsed:.1f}s, bound {bound:.0f}s) {detail}")
    assert ok, detail
    assert in_time, f"{elapsed:.1f}s exceeds {bound}s"


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# --------------------------------------------------------------------------


def test_criterion_1_dimensions(capsys):
    want = {(3, 2): (8, 10), (5, 2): (24, 26), (3, 3): (52, 55)}
    worst = 0.0
    got = {}
    for (p, n), (d, dp) in want.items():
        s, t1 = _timed(lambda: len(ca.enumerate_S_basis(p, n)))
        sp, t2 = _timed(lambda: len(ca.enumerate_S_basis(p, n, prime_variant=True)))
        worst = max(worst, t1, t2)
        got[(p, n)] = (s, sp)
    ok = got == want
    detail = ", ".join(f"(p,n)={k}: S={v[0]} S'={v[1]}" for k, v in got.items())
    report(capsys, 1, ok, worst, detail + "; slowest single enumeration shown as runtime")


def test_criterion_2_twist_axiom(capsys):
    t0 = time.perf_counter()
    rows = {}
    for p, n, spec in [(3, 2, V12), (3, 3, V12), (3, 3, PROD), (3, 3, zeta_chain(2))]:
        setup = qh.modular_setup(p, n)
        ctx = setup.ctx
        rep = check_twist_axiom(ctx, build_F(ctx, spec), build_Finv(ctx, spec))
        rows[f"p={p},n={n},{spec.label()}"] = rep["pass"]
    setup = qh.char0_setup(2, 4)
    ctx = setup.ctx
    for spec in (V12, TwistSpec.vertical(2, 1)):
        rep = check_twist_axiom(ctx, build_F(ctx, spec), build_Finv(ctx, spec))
        rows[f"char0,n=2,N=4,{spec.label()}"] = rep["pass"]
    # the literal F(1,2)F(3,1) violates the product index condition; recorded, not required
    lit = TwistSpec.product(TwistSpec.vertical(1, 2), TwistSpec.vertical(3, 1))
    setup = qh.modular_setup(3, 3)
    adm = qh.product_admissible(lit, setup.lie)
    lit_rep = check_twist_axiom(setup.ctx, build_F(setup.ctx, lit), build_Finv(setup.ctx, lit))
    elapsed = time.perf_counter() - t0
    ok = all(rows.values())
    detail = "; ".join(f"{k}: {'ok' if v else 'fail'}" for k, v in rows.items())
    detail += (f"; finding: literal F(1,2)F(3,1) index condition={adm['index_condition']},"
               f" cocycle={'ok' if lit_rep['cocycle']['pass'] else 'fails'}")
    report(capsys, 2, ok, elapsed, detail)


def test_criterion_3_jordanian(capsys):
    rep, elapsed = _timed(lambda: jordanian_equivalence(6))
    report(capsys, 3, rep["pass"], elapsed, f"series identity through t^{rep['N']}")


def test_criterion_4_combinatorics(capsys):
    t0 = time.perf_counter()
    ident = check_identity_suite(seed=0, bound=5, max_len=8)
    stir = all(stirling_by_enumeration(n) == [stirling_c(n, k) for k in range(n + 1)]
               for n in range(7))
    rising = all(list(rising_poly(0, n).coeffs) == [stirling_c(n, k) for k in range(n + 1)]
                 for n in range(7))
    non_integral = []
    for a, k, l in itertools.product(range(-8, 9), range(-8, 9), range(9)):
        try:
            grunspan_integral(a, k, l)
        except NonIntegral:
            non_integral.append((a, k, l))
    integral = not non_integral
    elapsed = time.perf_counter() - t0
    ok = all(v["pass"] for v in ident.values()) and stir and rising and integral
    detail = (", ".join(f"{k}={'ok' if v['pass'] else 'fail'}" for k, v in ident.items())
              + f"; stirling n<=6 {'ok' if stir and rising else 'fail'}"
              + f"; integrality {'ok' if integral else f'fails at {non_integral[0]}'}")
    report(capsys, 4, ok, elapsed, detail)


def test_criterion_5_oracle(capsys):
    t0 = time.perf_counter()
    rows = {}
    c0 = qh.char0_setup(2, 4)
    gens = qh.char0_generators(c0.lie, 3)
    for spec in (V12, TwistSpec.vertical(2, 1)):
        rows[f"char0 n=2 N=4 {spec.label()} ({len(gens)} gens)"] = qh.oracle_report(c0, spec, gens)
    for q in (0, 1):
        rows[f"(3,2) {V12.label()} q={q}"] = qh.oracle_report(qh.modular_setup(3, 2, q), V12)
        rows[f"(3,3) {H123.label()} q={q}"] = qh.oracle_report(qh.modular_setup(3, 3, q), H123)
    elapsed = time.perf_counter() - t0
    ok = all(r["pass"] for r in rows.values())
    detail = "; ".join(f"{k}: {'ok' if r['pass'] else 'fail'}" for k, r in rows.items())
    report(capsys, 5, ok, elapsed, detail + "; formulas as displayed")


def test_criterion_6_hopf_axioms(capsys):
    t0 = time.perf_counter()
    rows = {}
    for q in (0, 1):
        cases = [
            ("(3,2) vertical", qh.modular_setup(3, 2, q), V12),
            ("(3,3) horizontal", qh.modular_setup(3, 3, q), H123),
            ("(3,3) product F(1,2)F(3,2)", qh.modular_setup(3, 3, q), PROD),
        ]
        for name, setup, spec in cases:
            H = qh.ClosedForm(setup.ctx, spec, variant="corrected").structure()
            rows[f"{name} q={q}"] = qh.hopf_axiom_suite(H)["pass"]
    elapsed = time.perf_counter() - t0
    ok = all(rows.values())
    detail = "; ".join(f"{k}: {'ok' if v else 'fail'}" for k, v in rows.items())
    report(capsys, 6, ok, elapsed, detail + "; closed forms with the corrected B coefficient")


def test_criterion_7_hopf_ideal(capsys):
    t0 = time.perf_counter()
    rows = {}
    for q in (0, 1):
        rows[f"(3,2) vertical q={q}"] = qh.hopf_ideal_check(3, 2, V12, q)
        rows[f"(3,3) vertical q={q}"] = qh.hopf_ideal_check(3, 3, V12, q, variant="corrected")
        rows[f"(3,3) horizontal q={q}"] = qh.hopf_ideal_check(3, 3, H123, q)
    rows["(3,3) product q=0"] = qh.hopf_ideal_check(3, 3, PROD, 0, variant="corrected")
    elapsed = time.perf_counter() - t0
    ok = all(r["pass"] for r in rows.values())
    detail = "; ".join(f"{k}: {'ok' if r['pass'] else 'fail'}" for k, r in rows.items())
    report(capsys, 7, ok, elapsed, detail)


def test_criterion_8_radford(capsys):
    t0 = time.perf_counter()
    rows = {(p, q): qh.radford_report(p, 2, q) for p in (3, 5) for q in (0, 1)}
    elapsed = time.perf_counter() - t0
    ok = all(r["pass"] for r in rows.values())
    detail = "; ".join(f"p={p} q={q}: {'ok' if r['pass'] else 'fail'}" for (p, q), r in rows.items())
    report(capsys, 8, ok, elapsed, detail)


def test_criterion_9_sl3(capsys):
    t0 = time.perf_counter()
    tables = {p: qh.sl3_table(p) for p in (5, 3)}
    elapsed = time.perf_counter() - t0
    ok = True
    notes = []
    for p, tab in tables.items():
        rows = tab["rows"]
        matched = [k for k, r in rows.items() if r["displayed_matches_oracle"]]
        closed = tab["closed_vs_oracle_all_generators"]["pass"]
        findings = {k: r["witness"] for k, r in rows.items() if not r["displayed_matches_oracle"]}
        # every mismatch must come with a witness; the closed form must agree everywhere
        ok = ok and closed and len(rows) == 8 and all(findings.values())
        notes.append(f"p={p}: {len(matched)}/8 displayed rows equal the oracle,"
                     f" closed form {'equals' if closed else 'differs from'} the oracle on all generators")
        for k, w in findings.items():
            notes.append(f"p={p} finding {k}: witness {w['term']} coeff {w['coeff']} at t^{w['t_degree']};"
                         f" h<2> term fit {'matches' if rows[k].get('h<2>_term_matches_oracle') else 'fails'}")
    report(capsys, 9, ok, elapsed, "; ".join(notes))


def test_criterion_10_distinct(capsys):
    rep, elapsed = _timed(lambda: qh.distinct_structures(3, 3, 0))
    pair = next(r for r in rep["pairs"] if {r["a"], r["b"]} == {"zeta(1)", "zeta(2)"})
    ok = rep["pass"] and not pair["equal"] and pair["witness"] is not None
    w = pair["witness"]
    detail = (f"zeta(1) vs zeta(2) differ on {w['generator']}: {w['diff']['term']}"
              f" coeff {w['diff']['coeff']} at t^{w['diff']['t_degree']}") if w else "no witness"
    report(capsys, 10, ok, elapsed, detail)


def test_criterion_11_specialization(capsys):
    t0 = time.perf_counter()
    rows = {}
    for q in (0, 1):
        s32 = qh.modular_setup(3, 2, q)
        for spec in catalogue(2)["vertical"]:
            H = qh.ClosedForm(s32.ctx, spec).structure()
            rows[f"(3,2) {spec.label()} q={q}"] = qh.specialization_report(H)
    s33 = qh.modular_setup(3, 3, 0)
    cat = catalogue(3)
    for spec in cat["vertical"] + cat["horizontal"] + [PROD]:
        H = qh.ClosedForm(s33.ctx, spec, variant="corrected").structure()
        rows[f"(3,3) {spec.label()}"] = qh.specialization_report(H)
    for spec in cat["chains"]:
        rows[f"(3,3) conjugation {spec.label()}"] = qh.specialization_report(
            qh.conjugation_structure(s33.ctx, spec))
    sl = qh.sl_setup(5, 3)
    rows["sl3 p=5"] = qh.specialization_report(qh.ClosedForm(sl.ctx, H123).structure())
    elapsed = time.perf_counter() - t0
    ok = all(r["pass"] for r in rows.values())
    bad = [k for k, r in rows.items() if not r["pass"]]
    detail = f"{len(rows)} structures collapse to the standard one at t=0"
    if bad:
        detail = f"failing: {', '.join(bad)}"
    report(capsys, 11, ok, elapsed, detail)


if __name__ == "__main__":
    for name, fn in sorted(globals().items(), key=lambda kv: int(kv[0].split("_")[2])
                           if kv[0].startswith("test_criterion_") else 0):
        if name.startswith("test_criterion_"):
            try:
                fn(None)
            except AssertionError:
                pass
