"""The full acceptance battery behind the `selftest` subcommand.

Every criterion function returns a JSON-able dict with an "ok" flag and the
exact values it checked.  All randomness is seeded, all lists are sorted, and
no wall-clock data enters the report, so two runs produce byte-identical
output.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

from .cartan import (
    CartanMatrix,
    ValuedGraph,
    c_2n,
    c_pm,
    cartan_from_graph,
    pm_quiver,
    standard_quiver,
)
from .hall import (
    HallCtx,
    green_form,
    hall_mul,
    l_space,
    lperp,
    one,
    u,
    verify_embedding,
    verify_relations,
)
from .modcat import (
    Caps,
    QuiverRep,
    classify,
    euler_form,
    hall_number,
    iso_classes,
    pm_species,
    species_from_quiver,
)
from .presver import (
    check_lemma_41,
    check_s2,
    check_s2_reduction,
    reduce_mixed,
    reduce_mixed_mirror,
    serre_mixed_expr,
    serre_mixed_expr_mirror,
)
from .qlaurent import b_closed_form, b_partial_sum, check_identity_4_2, qint

QUIVER_CORPUS = ("a1", "a2", "a3", "b2", "kronecker")


def _random_cartan(rng: random.Random, max_n: int = 4) -> CartanMatrix:
    n = rng.randint(1, max_n)
    ids = tuple(str(i + 1) for i in range(n))
    dv = {ids[0]: 1}
    for v in ids[1:]:
        dv[v] = rng.choice((1, 1, 2, 3))
    edges = {}
    for k in range(1, n):
        pairs = [(ids[k - 1], ids[k])]
        if n > 2 and rng.random() < 0.3:
            a, b = rng.sample(range(n), 2)
            pairs.append((ids[min(a, b)], ids[max(a, b)]))
        for i, j in pairs:
            if (i, j) in edges or (j, i) in edges:
                continue
            li, lj = dv[i], dv[j]
            lcm = li * lj // gcd(li, lj)
            c = rng.choice((1, 2))
            edges[(i, j)] = c * lcm // li
            edges[(j, i)] = c * lcm // lj
    return cartan_from_graph(ValuedGraph(ids, edges, dv))


def criterion_1_lemma41() -> dict:
    """check_lemma_41 for n in 1..8, d in {1,2,3}; exact zero normal forms."""
    cases = []
    ok = True
    for n in range(1, 9):
        for d in (1, 2, 3):
            res = check_lemma_41(n, d)
            cases.append({"n": n, "d": d, "ok": res.ok,
                          "steps_plus": res.steps_plus, "steps_minus": res.steps_minus})
            ok = ok and res.ok
    return {"ok": ok, "cases": cases}


def criterion_2_lemma42() -> dict:
    """Partial sums equal closed forms for 1 <= i <= n <= 12, and B_nn = -[2n+1]."""
    ok = True
    checked = 0
    for n in range(1, 13):
        for i in range(1, n + 1):
            ok = ok and b_partial_sum(n, i) == b_closed_form(n, i)
            checked += 1
        ok = ok and b_closed_form(n, n) == -qint(2 * n + 1)
    return {"ok": ok, "pairs_checked": checked}


def criterion_3_sum_b() -> dict:
    """[2n+1] + B_nn = 0 for n <= 20."""
    ok = all((qint(2 * n + 1) + b_partial_sum(n, n)).is_zero() for n in range(1, 21))
    return {"ok": ok, "max_n": 20}


def criterion_4_identity() -> dict:
    """[2i+1][n] - [n+i+1][i] = [n-i][i+1] for 1 <= i <= n <= 12."""
    ok = all(check_identity_4_2(n, i) for n in range(1, 13) for i in range(1, n + 1))
    return {"ok": ok, "max_n": 12}


def criterion_5_lemma23() -> dict:
    """Both n = 1 Serre sums reduce to exact zero for d in {1,2}."""
    cases = []
    ok = True
    for d in (1, 2):
        plus = reduce_mixed(serre_mixed_expr(1, d), d, 2).is_zero()
        minus = reduce_mixed_mirror(serre_mixed_expr_mirror(1, d), d, 2).is_zero()
        cases.append({"d": d, "plus_zero": plus, "minus_zero": minus})
        ok = ok and plus and minus
    return {"ok": ok, "cases": cases}


def criterion_6_s2() -> dict:
    """check_s2 for m <= 10 and check_s2_reduction for n <= 5, d in {1,2}."""
    ok = all(check_s2(m) for m in range(1, 11))
    ok = ok and all(check_s2_reduction(n, d) for n in range(1, 6) for d in (1, 2))
    return {"ok": ok, "max_m": 10, "max_n": 5}


def criterion_7_blocks() -> dict:
    """c_pm([2]), c_pm = c_2n(.,1) on seeded randoms, pm_quiver/Cartan commutation."""
    ok = c_pm(CartanMatrix(("1",), ((2,),))).entries == ((2, -2), (-2, 2))
    rng = random.Random(20)
    rand_ok = 0
    for _ in range(20):
        c = _random_cartan(rng)
        if c_pm(c) == c_2n(c, 1):
            rand_ok += 1
    ok = ok and rand_ok == 20
    corpus_ok = []
    for name in QUIVER_CORPUS:
        q = standard_quiver(name)
        match = cartan_from_graph(pm_quiver(q).graph) == c_pm(cartan_from_graph(q.graph))
        corpus_ok.append({"quiver": name, "ok": match})
        ok = ok and match
    return {"ok": ok, "random_matrices": rand_ok, "corpus": corpus_ok}


def criterion_8_euler_cartan() -> dict:
    """2(i,j)/(i,i) from the species of Gamma^pm equals c_pm(Cartan(Gamma))."""
    ok = True
    cases = []
    for name in ("a1", "a2"):
        for q in (2, 3):
            sq = standard_quiver(name)
            s = pm_species(species_from_quiver(sq, q))
            want = c_pm(cartan_from_graph(sq.graph)).entries
            n = s.nvertices()
            got = []
            exact = True
            for i in range(n):
                row = []
                for j in range(n):
                    ei, ej = s.simple_dimvec(i), s.simple_dimvec(j)
                    sym = euler_form(s, ei, ej) + euler_form(s, ej, ei)
                    sii = 2 * euler_form(s, ei, ei)
                    exact = exact and (2 * sym) % sii == 0
                    row.append(2 * sym // sii)
                got.append(tuple(row))
            match = exact and tuple(got) == want
            cases.append({"quiver": name, "q": q, "ok": match})
            ok = ok and match
    return {"ok": ok, "cases": cases}


def _pm_ctx(name: str, q: int, grading_cap: int = 6) -> HallCtx:
    return HallCtx(pm_species(species_from_quiver(standard_quiver(name), q)),
                   Caps(enumeration=8, canonicalization=8), grading_cap=grading_cap)


def _strip_millis(report: list[dict]) -> list[dict]:
    out = []
    for entry in report:
        e = dict(entry)
        e["millis"] = 0
        out.append(e)
    return out


def criterion_9_relations() -> dict:
    """(1pm) on A1 at q in {2,3}; (1+), (1-), (3pm) on A2 at q = 2."""
    reports = []
    ok = True
    for q in (2, 3):
        rep = verify_relations(_pm_ctx("a1", q), ["1pm"])
        ok = ok and all(r["status"] == "ok" for r in rep)
        reports.append({"quiver": "a1", "q": q, "entries": _strip_millis(rep)})
    rep = verify_relations(_pm_ctx("a2", 2), ["1+", "1-", "3pm"])
    ok = ok and all(r["status"] == "ok" for r in rep)
    reports.append({"quiver": "a2", "q": 2, "entries": _strip_millis(rep)})
    return {"ok": ok, "reports": reports}


def criterion_10_embedding() -> dict:
    """Lemma 3.6 equalities for A1 into its doubling, total dimension <= 3, q in {2,3}."""
    ok = True
    cases = []
    for q in (2, 3):
        rep = verify_embedding(_pm_ctx("a1", q), max_total_dim=3)
        good = all(e["ok"] for e in rep)
        cases.append({"q": q, "checked": len(rep), "ok": good})
        ok = ok and good
    return {"ok": ok, "cases": cases}


def criterion_11_axioms() -> dict:
    """Associativity (total dim <= 5), identity, grading, and g = q+1 sanity."""
    ok = True
    assoc_counts = {}
    for name in ("a1", "a2", "a1pm"):
        if name == "a1pm":
            ctx = _pm_ctx("a1", 2, grading_cap=6)
        else:
            ctx = HallCtx(species_from_quiver(standard_quiver(name), 2),
                          Caps(enumeration=8, canonicalization=8), grading_cap=6)
        s = ctx.species
        from .hall import _dimvecs_up_to

        basis = []
        for dv in _dimvecs_up_to(s, 5):
            if any(dv):
                for c in iso_classes(s, dv, ctx.caps):
                    basis.append((s.total_kdim(dv), u(ctx, c.id)))
        cache = {}

        def mul(a, b, _ctx=ctx, _cache=cache):
            key = (tuple(sorted(a.terms)), tuple(sorted(b.terms)))
            if key not in _cache:
                _cache[key] = hall_mul(_ctx, a, b)
            return _cache[key]

        count = 0
        for ta, a in basis:
            for tb, b in basis:
                if ta + tb > 5:
                    continue
                ab = mul(a, b)
                for tc, c in basis:
                    if ta + tb + tc > 5:
                        continue
                    lhs = hall_mul(ctx, ab, c)
                    rhs = hall_mul(ctx, a, mul(b, c))
                    ok = ok and lhs == rhs
                    count += 1
        assoc_counts[name] = count
        e = one(ctx)
        x = basis[0][1] + basis[-1][1]
        ok = ok and hall_mul(ctx, e, x) == x and hall_mul(ctx, x, e) == x
    sanity = []
    for q in (2, 3):
        s = species_from_quiver(standard_quiver("a1"), q)
        caps = Caps(enumeration=8, canonicalization=8)
        S = classify(QuiverRep.simple(s, 0), caps)
        K2 = classify(QuiverRep.zero(s, (2,)), caps)
        g = hall_number(s, K2, S, S, caps)
        sanity.append({"q": q, "g": g, "ok": g == q + 1})
        ok = ok and g == q + 1
    return {"ok": ok, "associativity_triples": assoc_counts, "hall_sanity": sanity}


def criterion_12_lperp() -> dict:
    """Kronecker-type quiver at q = 2: dim L + dim Lperp = dim H at delta, Lperp nonzero."""
    ctx = HallCtx(species_from_quiver(standard_quiver("kronecker"), 2),
                  Caps(enumeration=8, canonicalization=8), grading_cap=6)
    delta = (1, 1)
    dim_h = len(iso_classes(ctx.species, delta, ctx.caps))
    dim_l = len(l_space(ctx, delta))
    perp = lperp(ctx, delta)
    dim_perp = len(perp.basis)
    orth = all(green_form(ctx, x, l).is_zero() for x in perp.basis for l in l_space(ctx, delta))
    ok = dim_l + dim_perp == dim_h and dim_perp >= 1 and orth
    return {"ok": ok, "dim_H": dim_h, "dim_L": dim_l, "dim_Lperp": dim_perp,
            "orthogonal": orth,
            "norms": [repr(n) for n in perp.norms]}


CRITERIA = (
    ("1", "lemma 4.1 symbolic reduction", criterion_1_lemma41),
    ("2", "lemma 4.2 partial sums vs closed form", criterion_2_lemma42),
    ("3", "sum (B) vanishes", criterion_3_sum_b),
    ("4", "section 4 quantum integer identity", criterion_4_identity),
    ("5", "lemma 2.3 obligations", criterion_5_lemma23),
    ("6", "telescoping identity and pairing step", criterion_6_s2),
    ("7", "block Cartan constructions", criterion_7_blocks),
    ("8", "Euler form reproduces the doubled Cartan matrix", criterion_8_euler_cartan),
    ("9", "Hall relation suite", criterion_9_relations),
    ("10", "plus/minus embedding equalities", criterion_10_embedding),
    ("11", "Hall algebra axioms", criterion_11_axioms),
    ("12", "orthogonal complement machinery", criterion_12_lperp),
)


def run_all() -> dict:
    """Run criteria 1-12 (13, byte-identical reports, is checked by running this twice)."""
    results = []
    all_ok = True
    for cid, name, fn in CRITERIA:
        res = fn()
        results.append({"criterion": cid, "name": name, "status": "pass" if res["ok"] else "fail",
                        "details": res})
        all_ok = all_ok and res["ok"]
    return {"ok": all_ok, "criteria": results}
