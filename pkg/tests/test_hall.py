from fractions import Fraction
from itertools import product as iproduct

import pytest

from hallq.cartan import c_pm, cartan_from_graph, standard_quiver, borcherds_from_form
from hallq.modcat import Caps, CapExceeded, QuiverRep, classify, euler_form, iso_classes, pm_species, species_from_quiver
from hallq.presver import NCExpr, RatLaurent
from hallq.qlaurent import QScalar, v_power
from hallq.hall import (
    HallCtx,
    HallElem,
    UnboundGenerator,
    UnknownClass,
    embed_pm,
    eval_nc,
    green_form,
    hall_mul,
    l_space,
    lperp,
    one,
    u,
    verify_embedding,
    verify_relations,
    word_product,
)

CAPS = Caps(enumeration=8, canonicalization=8)


def ctx_for(name, q, cap=6):
    return HallCtx(species_from_quiver(standard_quiver(name), q), CAPS, grading_cap=cap)


def pm_ctx(name, q, cap=6):
    return HallCtx(pm_species(species_from_quiver(standard_quiver(name), q)), CAPS, grading_cap=cap)


def test_identity_element():
    ctx = pm_ctx("a1", 2)
    x = u(ctx, ctx.simple_id(0)) + u(ctx, ctx.simple_id(1)).scale(QScalar(0, 1, 2))
    e = one(ctx)
    assert hall_mul(ctx, e, x) == x
    assert hall_mul(ctx, x, e) == x


def test_a1_square_of_simple():
    ctx = ctx_for("a1", 2)
    S = ctx.simple_id(0)
    K2 = classify(QuiverRep.zero(ctx.species, (2,)), CAPS)
    got = hall_mul(ctx, u(ctx, S), u(ctx, S))
    assert got == HallElem(2, {K2: QScalar(0, 3, 2)})  # 3*sqrt(2)


def test_a2_product_twist():
    ctx = ctx_for("a2", 2)
    S1, S2 = ctx.simple_id(0), ctx.simple_id(1)
    got = hall_mul(ctx, u(ctx, S1), u(ctx, S2))
    # v^-1 * (u_{S1+S2} + u_P) at q = 2: v^-1 = sqrt(2)/2
    cls = iso_classes(ctx.species, (1, 1), CAPS)
    want = HallElem(2, {c.id: QScalar(0, Fraction(1, 2), 2) for c in cls})
    assert got == want
    # opposite order has twist v^0 and only the split extension
    got_rev = hall_mul(ctx, u(ctx, S2), u(ctx, S1))
    semisimple = classify(QuiverRep.zero(ctx.species, (1, 1)), CAPS)
    assert got_rev == HallElem(2, {semisimple: QScalar(1, 0, 2)})


def test_grading_containment():
    ctx = pm_ctx("a1", 2)
    Sp, Sm = u(ctx, ctx.simple_id(0)), u(ctx, ctx.simple_id(1))
    prod = hall_mul(ctx, Sp, Sm)
    assert prod.support_dimvecs() == {(1, 1)}
    prod2 = hall_mul(ctx, prod, Sp)
    assert prod2.support_dimvecs() <= {(2, 1)}


def test_grading_cap_enforced():
    ctx = pm_ctx("a1", 2, cap=2)
    Sp = u(ctx, ctx.simple_id(0))
    x = hall_mul(ctx, Sp, Sp)
    with pytest.raises(CapExceeded):
        hall_mul(ctx, x, Sp)


def test_associativity_sample():
    for name in ("a1", "a2"):
        ctx = ctx_for(name, 2)
        gens = [u(ctx, ctx.simple_id(i)) for i in range(ctx.species.nvertices())]
        for a in gens:
            for b in gens:
                for c in gens:
                    assert hall_mul(ctx, hall_mul(ctx, a, b), c) == hall_mul(ctx, a, hall_mul(ctx, b, c))
    ctx = pm_ctx("a1", 2)
    basis = [u(ctx, c.id) for dv in [(1, 0), (0, 1), (1, 1)] for c in
             iso_classes(ctx.species, dv, CAPS)]
    for a in basis:
        for b in basis:
            for c in basis:
                tot = sum(sum(dv) for x in (a, b, c) for dv in x.support_dimvecs())
                if tot > 4:
                    continue
                assert hall_mul(ctx, hall_mul(ctx, a, b), c) == hall_mul(ctx, a, hall_mul(ctx, b, c))


def test_green_form_examples():
    ctx = pm_ctx("a1", 2)
    e = one(ctx)
    assert green_form(ctx, e, e) == QScalar(1, 0, 2)
    Sp, Sm = u(ctx, ctx.simple_id(0)), u(ctx, ctx.simple_id(1))
    assert green_form(ctx, Sp, Sm).is_zero()
    assert green_form(ctx, Sp, Sp) == QScalar(1, 0, 2)
    assert green_form(ctx, Sp, Sp, "aut-order") == QScalar(1, 0, 2)  # |GL_1(F_2)| = 1


def test_green_form_nondegenerate_on_graded_pieces():
    ctx = pm_ctx("a1", 2)
    for dv in [(1, 0), (1, 1), (2, 1)]:
        for c in iso_classes(ctx.species, dv, CAPS):
            x = u(ctx, c.id)
            assert not green_form(ctx, x, x).is_zero()


def rational_rank_oracle(vectors, ids, q):
    """Independent rank over Q(sqrt q): flatten to 2n rational coords, rank/2."""
    cols = {cid: k for k, cid in enumerate(ids)}
    rows = []
    for v in vectors:
        flat = [Fraction(0)] * (2 * len(ids))
        for cid, c in v.terms.items():
            flat[2 * cols[cid]] = c.a
            flat[2 * cols[cid] + 1] = c.b
        rows.append(flat)
        flat2 = [Fraction(0)] * (2 * len(ids))
        for cid, c in v.terms.items():  # sqrt(q) * v
            flat2[2 * cols[cid]] = c.b * q
            flat2[2 * cols[cid] + 1] = c.a
        rows.append(flat2)
    rank = 0
    ncols = 2 * len(ids)
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        rank += 1
    assert rank % 2 == 0
    return rank // 2


def test_l_space_examples():
    ctx = ctx_for("a1", 2, cap=4)
    assert l_space(ctx, (1,)) == []
    basis = l_space(ctx, (2,))
    assert len(basis) == 1
    kron = pm_ctx("a1", 2)
    lb = l_space(kron, (1, 1))
    assert len(lb) == 2
    ids = [c.id for c in iso_classes(kron.species, (1, 1), CAPS)]
    assert rational_rank_oracle(lb, ids, 2) == 2


def test_lperp_kronecker_delta():
    kron = pm_ctx("a1", 2)
    res = lperp(kron, (1, 1))
    assert len(res.basis) == 2  # dim H - dim L = 4 - 2
    for x in res.basis:
        for l in l_space(kron, (1, 1)):
            assert green_form(kron, x, l).is_zero()
    for x, n in zip(res.basis, res.norms):
        assert green_form(kron, x, x) == n
    # orthogonality inside the complement
    if len(res.basis) == 2:
        assert green_form(kron, res.basis[0], res.basis[1]).is_zero()


def test_lperp_simple_and_full():
    ctx = ctx_for("a1", 2, cap=4)
    simple = lperp(ctx, (1,))
    assert len(simple.basis) == 1
    assert green_form(ctx, simple.basis[0], simple.basis[0]) == QScalar(1, 0, 2)
    assert lperp(ctx, (2,)).basis == []  # L fills H_(2)


def test_complement_dimension_property():
    kron = pm_ctx("a1", 2)
    for dv in [(1, 0), (1, 1), (2, 1)]:
        nh = len(iso_classes(kron.species, dv, CAPS))
        nl = len(l_space(kron, dv))
        nperp = len(lperp(kron, dv).basis)
        assert nl + nperp == nh


def test_embed_pm_classes():
    ctx = pm_ctx("a1", 2)
    base = ctx.base
    zero = embed_pm(ctx, "+", base.zero_id())
    assert zero == ctx.zero_id()
    sp = embed_pm(ctx, "+", base.simple_id(0))
    assert sp == ctx.simple_id(0)
    sm = embed_pm(ctx, "-", base.simple_id(0))
    assert sm == ctx.simple_id(1)
    K2 = classify(QuiverRep.zero(base.species, (2,)), CAPS)
    up = embed_pm(ctx, "+", K2)
    assert up.dimvec == (2, 0)
    with pytest.raises(UnknownClass):
        embed_pm(HallCtx(base.species, CAPS), "+", K2)


def test_verify_embedding_a1():
    ctx = pm_ctx("a1", 2, cap=6)
    report = verify_embedding(ctx, max_total_dim=3)
    assert report
    assert all(entry["ok"] for entry in report)
    kinds = {e["check"] for e in report}
    assert kinds == {"euler", "hall"}
    signs = {e["sign"] for e in report}
    assert signs == {"+", "-"}


def test_eval_nc_basic():
    ctx = pm_ctx("a1", 2)
    Sp = u(ctx, ctx.simple_id(0))
    expr = NCExpr.word(("g",))
    assert eval_nc(ctx, expr, {"g": Sp}) == Sp
    with pytest.raises(UnboundGenerator):
        eval_nc(ctx, NCExpr.word(("h",)), {"g": Sp})
    # scalar with denominator: (1/(v - v^-1)) * g evaluated at sqrt 2
    c = RatLaurent(1, v_power(1) - v_power(-1))
    expr2 = NCExpr.word(("g",), c)
    got = eval_nc(ctx, expr2, {"g": Sp})
    inv = (QScalar(0, 1, 2) - QScalar(0, Fraction(1, 2), 2)).inverse()
    assert got == Sp.scale(inv)


def test_commutator_not_zero_without_torus():
    # u+ u- - u- u+ is nonzero in H (the torus correction lives outside H)
    ctx = pm_ctx("a1", 2)
    expr = NCExpr.word(("x", "y")) - NCExpr.word(("y", "x"))
    res = eval_nc(ctx, expr, {"x": u(ctx, ctx.simple_id(0)), "y": u(ctx, ctx.simple_id(1))})
    assert not res.is_zero()


def test_verify_relations_a1_pm():
    for q in (2, 3):
        ctx = pm_ctx("a1", q)
        report = verify_relations(ctx, ["1pm"])
        assert len(report) == 2
        assert all(r["status"] == "ok" for r in report)


def test_verify_relations_a2():
    ctx = pm_ctx("a2", 2)
    report = verify_relations(ctx, ["1+", "1-", "3pm"])
    by_rel = {}
    for r in report:
        by_rel.setdefault(r["relation"], []).append(r)
    assert all(r["status"] == "ok" for r in report)
    assert len(by_rel["1+"]) == 2 and len(by_rel["1-"]) == 2
    assert len(by_rel["3pm"]) == 2


def test_verify_relations_vacuous_families():
    ctx = pm_ctx("a1", 2)
    report = verify_relations(ctx, ["1+", "2pm", "2+"])
    status = {r["relation"]: r["status"] for r in report}
    assert status["1+"] == "vacuous"  # single vertex, no j != i
    assert status["2pm"] == "vacuous"
    assert status["2+"] == "vacuous"


def test_verify_relations_2plus_a3():
    # A3 has (1,3) = 0, so u+_1 and u+_3 must commute
    ctx = pm_ctx("a3", 2)
    report = verify_relations(ctx, ["2+", "2-"])
    assert report and all(r["status"] == "ok" for r in report)
    assert {tuple(sorted(r["instance"].values())) for r in report} == {("1", "3")}


def test_cartan_extraction_via_borcherds():
    for name in ("a1", "a2"):
        for q in (2, 3):
            s_pm = pm_species(species_from_quiver(standard_quiver(name), q))
            n = s_pm.nvertices()
            pairs = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    ei, ej = s_pm.simple_dimvec(i), s_pm.simple_dimvec(j)
                    pairs[i][j] = euler_form(s_pm, ei, ej) + euler_form(s_pm, ej, ei)
            data = [(v, pairs[i][i], True) for i, v in enumerate(s_pm.vertices)]
            got = borcherds_from_form(data, pairs)
            want = c_pm(cartan_from_graph(standard_quiver(name).graph))
            assert got.entries == want.entries


def test_unknown_class():
    ctx = ctx_for("a1", 2)
    from hallq.modcat import IsoClassId

    with pytest.raises(UnknownClass):
        u(ctx, IsoClassId((1, 1), b""))
