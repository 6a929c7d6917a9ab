"""Twisted Ringel-Hall algebra of a species at v = sqrt(q), exactly.

Elements are finite QScalar-weighted sums of isomorphism classes; the product
is u_a u_b = v^<|a|,|b|> sum_g g^gamma_{a,b} u_gamma with Hall numbers taken
from exact submodule enumeration.  On top of the algebra: Green's diagonal
form, the proper-product subspaces L_nu and their orthogonal complements, the
plus/minus embeddings of a base Hall algebra into its doubled quiver, and
numeric verification of the relation systems that hold inside H.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .cartan import cartan_from_graph
from .modcat import (
    Caps,
    CapExceeded,
    DimMismatch,
    DimVec,
    IsoClassId,
    QuiverRep,
    SpeciesSpec,
    aut_order,
    classify,
    embed_rep_pm,
    euler_form,
    ext_self_card,
    hall_table,
    iso_classes,
    rep_of,
)
from .presver import NCExpr
from .qlaurent import QScalar, eval_sqrt_q, sqrt_q_power


class UnknownClass(Exception):
    """Isomorphism class does not belong to this context."""


class UnboundGenerator(Exception):
    """A generator symbol in an expression has no Hall-algebra binding."""


class RelationViolated(Exception):
    """A relation expected to hold evaluated to a nonzero element."""


class HallCtx:
    """Fixed-q Hall algebra context: species, caps, and the grading cap."""

    def __init__(self, species: SpeciesSpec, caps: Optional[Caps] = None,
                 grading_cap: Optional[int] = None):
        self.species = species
        self.q = species.q
        self.caps = caps or Caps()
        self.grading_cap = grading_cap if grading_cap is not None else self.caps.canonicalization
        self.base: Optional[HallCtx] = None
        if species.pm_base is not None:
            self.base = HallCtx(species.pm_base, self.caps, self.grading_cap)

    def scalar(self, x) -> QScalar:
        return QScalar.of(x, self.q)

    def check_grading(self, dv: DimVec):
        total = self.species.total_kdim(dv)
        if total > self.grading_cap:
            raise CapExceeded(f"total k-dimension {total} exceeds grading cap {self.grading_cap}")

    def classes(self, dv: DimVec):
        self.check_grading(dv)
        return iso_classes(self.species, dv, self.caps)

    def simple_id(self, i: int) -> IsoClassId:
        return classify(QuiverRep.simple(self.species, i), self.caps)

    def zero_id(self) -> IsoClassId:
        return classify(QuiverRep.zero(self.species, self.species.zero_dimvec()), self.caps)

    def __repr__(self):
        return f"HallCtx(q={self.q}, species={self.species!r})"


@dataclass
class HallElem:
    """Finite scalar-weighted combination of isomorphism classes."""

    q: int
    terms: dict[IsoClassId, QScalar] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {k: v for k, v in self.terms.items() if not v.is_zero()}

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, HallElem):
            return NotImplemented
        return self.q == other.q and self.terms == other.terms

    def __add__(self, other: "HallElem") -> "HallElem":
        t = dict(self.terms)
        for k, v in other.terms.items():
            s = t.get(k, QScalar.of(0, self.q)) + v
            if s.is_zero():
                t.pop(k, None)
            else:
                t[k] = s
        return HallElem(self.q, t)

    def __sub__(self, other: "HallElem") -> "HallElem":
        return self + other.scale(QScalar.of(-1, self.q))

    def scale(self, c: QScalar) -> "HallElem":
        if c.is_zero():
            return HallElem(self.q, {})
        return HallElem(self.q, {k: v * c for k, v in self.terms.items()})

    def support_dimvecs(self) -> set[DimVec]:
        return {k.dimvec for k in self.terms}

    def sorted_terms(self) -> list[tuple[IsoClassId, QScalar]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = [f"({c!r})*u[{k.dimvec},{k.canonical.hex()}]" for k, c in self.sorted_terms()]
        return " + ".join(bits)


def u(ctx: HallCtx, cls: IsoClassId) -> HallElem:
    """Basis element of a known class."""
    try:
        rep_of(ctx.species, cls, ctx.caps)
    except (DimMismatch, KeyError) as exc:
        raise UnknownClass(str(exc)) from exc
    return HallElem(ctx.q, {cls: QScalar.of(1, ctx.q)})


def one(ctx: HallCtx) -> HallElem:
    return u(ctx, ctx.zero_id())


def hall_mul(ctx: HallCtx, x: HallElem, y: HallElem) -> HallElem:
    """Bilinear extension of u_a u_b = v^<|a|,|b|> sum g^c_{a,b} u_c."""
    s = ctx.species
    out = HallElem(ctx.q, {})
    for a_id, ca in x.sorted_terms():
        for b_id, cb in y.sorted_terms():
            dv = tuple(m + n for m, n in zip(a_id.dimvec, b_id.dimvec))
            ctx.check_grading(dv)
            twist = sqrt_q_power(ctx.q, euler_form(s, a_id.dimvec, b_id.dimvec))
            coeff = ca * cb * twist
            acc: dict[IsoClassId, QScalar] = {}
            for cls in iso_classes(s, dv, ctx.caps):
                g = hall_table(s, cls.id, ctx.caps).get((a_id, b_id), 0)
                if g:
                    acc[cls.id] = coeff * g
            out = out + HallElem(ctx.q, acc)
    return out


def word_product(ctx: HallCtx, factors: Sequence[HallElem]) -> HallElem:
    prod = one(ctx)
    for f in factors:
        prod = hall_mul(ctx, prod, f)
    return prod


def _a_alpha(ctx: HallCtx, cls: IsoClassId, normalization: str) -> int:
    if normalization == "ext-card":
        return ext_self_card(rep_of(ctx.species, cls, ctx.caps), ctx.caps)
    if normalization == "aut-order":
        return aut_order(rep_of(ctx.species, cls, ctx.caps), ctx.caps)
    raise ValueError("normalization must be 'ext-card' or 'aut-order'")


def green_form(ctx: HallCtx, x: HallElem, y: HallElem, normalization: str = "ext-card") -> QScalar:
    """Diagonal form [u_a, u_b] = delta_{ab}/a_a, bilinearly extended."""
    out = QScalar.of(0, ctx.q)
    for cls, cx in x.terms.items():
        cy = y.terms.get(cls)
        if cy is not None:
            out = out + cx * cy / _a_alpha(ctx, cls, normalization)
    return out


# -- exact linear algebra over Q(sqrt q) ---------------------------------------


def _rref_qscalar(rows: list[list[QScalar]], q: int) -> tuple[list[list[QScalar]], list[int]]:
    rows = [list(r) for r in rows if any(not c.is_zero() for c in r)]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    rows = [row for row in rows if any(not c.is_zero() for c in row)]
    return rows, pivots


def _vectors_to_elems(ctx: HallCtx, rows: Iterable[Sequence[QScalar]],
                      ids: Sequence[IsoClassId]) -> list[HallElem]:
    out = []
    for row in rows:
        out.append(HallElem(ctx.q, {i: c for i, c in zip(ids, row) if not c.is_zero()}))
    return out


def graded_ids(ctx: HallCtx, nu: DimVec) -> list[IsoClassId]:
    return [c.id for c in ctx.classes(tuple(nu))]


def l_space(ctx: HallCtx, nu: DimVec) -> list[HallElem]:
    """Echelonized basis of L_nu = sum of H_beta H_gamma over proper decompositions."""
    nu = tuple(nu)
    ctx.check_grading(nu)
    ids = graded_ids(ctx, nu)
    col = {cid: k for k, cid in enumerate(ids)}
    rows = []
    for beta in _proper_decompositions(nu):
        gamma = tuple(n - b for n, b in zip(nu, beta))
        for a_cls in ctx.classes(beta):
            for b_cls in ctx.classes(gamma):
                prod = hall_mul(ctx, u(ctx, a_cls.id), u(ctx, b_cls.id))
                row = [QScalar.of(0, ctx.q) for _ in ids]
                for cid, c in prod.terms.items():
                    row[col[cid]] = c
                rows.append(row)
    basis, _ = _rref_qscalar(rows, ctx.q)
    return _vectors_to_elems(ctx, basis, ids)


def _proper_decompositions(nu: DimVec) -> list[DimVec]:
    from itertools import product as iproduct

    out = []
    for beta in iproduct(*(range(n + 1) for n in nu)):
        if any(beta) and beta != nu:
            out.append(beta)
    return out


@dataclass
class LperpBasis:
    """Orthogonal (orthonormal where possible) basis of L_nu^perp with its norms."""

    basis: list[HallElem]
    norms: list[QScalar]
    orthonormal: bool


def lperp(ctx: HallCtx, nu: DimVec, normalization: str = "ext-card") -> LperpBasis:
    """Basis of {x in H_nu : [x, L_nu] = 0}, Gram-Schmidt orthogonalized."""
    nu = tuple(nu)
    ids = graded_ids(ctx, nu)
    lbasis = l_space(ctx, nu)
    weights = [QScalar.of(1, ctx.q) / _a_alpha(ctx, cid, normalization) for cid in ids]
    rows = []
    for vec in lbasis:
        rows.append([vec.terms.get(cid, QScalar.of(0, ctx.q)) * w for cid, w in zip(ids, weights)])
    red, pivots = _rref_qscalar(rows, ctx.q)
    free = [c for c in range(len(ids)) if c not in pivots]
    null_rows = []
    for fc in free:
        vec = [QScalar.of(0, ctx.q) for _ in ids]
        vec[fc] = QScalar.of(1, ctx.q)
        for row, pc in zip(red, pivots):
            vec[pc] = -row[fc]
        null_rows.append(vec)
    elems = _vectors_to_elems(ctx, null_rows, ids)
    ortho: list[HallElem] = []
    for v in elems:
        w = v
        for prev in ortho:
            c = green_form(ctx, w, prev, normalization) / green_form(ctx, prev, prev, normalization)
            w = w - prev.scale(c)
        ortho.append(w)
    norms = []
    final = []
    all_unit = True
    for w in ortho:
        n = green_form(ctx, w, w, normalization)
        root = n.sqrt()
        if root is not None and not root.is_zero():
            w = w.scale(QScalar.of(1, ctx.q) / root)
            n = QScalar.of(1, ctx.q)
        else:
            all_unit = False
        final.append(w)
        norms.append(n)
    return LperpBasis(final, norms, all_unit)


def embed_pm(ctx_pm: HallCtx, sign: str, cls: IsoClassId) -> IsoClassId:
    """Class of the positive/negative embedding of a base class."""
    if ctx_pm.base is None:
        raise UnknownClass("context species is not a pm doubling")
    try:
        base_rep = rep_of(ctx_pm.base.species, cls, ctx_pm.caps)
    except DimMismatch as exc:
        raise UnknownClass(str(exc)) from exc
    return classify(embed_rep_pm(ctx_pm.species, sign, base_rep), ctx_pm.caps)


def verify_embedding(ctx_pm: HallCtx, max_total_dim: int = 3) -> list[dict]:
    """Check <a,b> = <a^s, b^s> and g^c_{a,b} = g^{c^s}_{a^s,b^s} for both signs.

    Covers every triple of base classes whose top class has total k-dimension
    at most max_total_dim.
    """
    base = ctx_pm.base
    if base is None:
        raise UnknownClass("context species is not a pm doubling")
    s_base, s_pm = base.species, ctx_pm.species
    report = []
    dimvecs = _dimvecs_up_to(s_base, max_total_dim)
    for sign in ("+", "-"):
        for a_dv in dimvecs:
            for b_dv in dimvecs:
                if s_base.total_kdim(a_dv) + s_base.total_kdim(b_dv) > max_total_dim:
                    continue
                if not any(a_dv) or not any(b_dv):
                    continue
                lhs = euler_form(s_base, a_dv, b_dv)
                a_pm = _embed_dimvec(s_base, sign, a_dv)
                b_pm = _embed_dimvec(s_base, sign, b_dv)
                rhs = euler_form(s_pm, a_pm, b_pm)
                report.append({
                    "check": "euler", "sign": sign,
                    "instance": {"a": list(a_dv), "b": list(b_dv)},
                    "lhs": lhs, "rhs": rhs, "ok": lhs == rhs,
                })
    for sign in ("+", "-"):
        for g_dv in dimvecs:
            if not any(g_dv):
                continue
            for g_cls in iso_classes(s_base, g_dv, base.caps):
                table = hall_table(s_base, g_cls.id, base.caps)
                g_pm = embed_pm(ctx_pm, sign, g_cls.id)
                table_pm = hall_table(s_pm, g_pm, ctx_pm.caps)
                for a_dv in _sub_dimvecs(g_dv):
                    b_dv = tuple(g - a for g, a in zip(g_dv, a_dv))
                    for a_cls in iso_classes(s_base, a_dv, base.caps):
                        for b_cls in iso_classes(s_base, b_dv, base.caps):
                            lhs = table.get((a_cls.id, b_cls.id), 0)
                            rhs = table_pm.get(
                                (embed_pm(ctx_pm, sign, a_cls.id), embed_pm(ctx_pm, sign, b_cls.id)), 0)
                            report.append({
                                "check": "hall", "sign": sign,
                                "instance": {
                                    "gamma": [list(g_dv), g_cls.id.hex()],
                                    "alpha": [list(a_dv), a_cls.id.hex()],
                                    "beta": [list(b_dv), b_cls.id.hex()],
                                },
                                "lhs": lhs, "rhs": rhs, "ok": lhs == rhs,
                            })
    return report


def _dimvecs_up_to(s: SpeciesSpec, max_total: int) -> list[DimVec]:
    from itertools import product as iproduct

    out = []
    caps_per = [max_total // d for d in s.d]
    for dv in iproduct(*(range(c + 1) for c in caps_per)):
        if s.total_kdim(dv) <= max_total:
            out.append(dv)
    return out


def _sub_dimvecs(dv: DimVec) -> list[DimVec]:
    from itertools import product as iproduct

    return list(iproduct(*(range(n + 1) for n in dv)))


def _embed_dimvec(s_base: SpeciesSpec, sign: str, dv: DimVec) -> DimVec:
    zeros = (0,) * len(dv)
    return tuple(dv) + zeros if sign == "+" else zeros + tuple(dv)


def eval_nc(ctx: HallCtx, expr: NCExpr, binding: dict[str, HallElem]) -> HallElem:
    """Substitute generators with Hall elements and evaluate exactly."""
    out = HallElem(ctx.q, {})
    for word in sorted(expr.terms):
        coeff_rl = expr.terms[word]
        den = eval_sqrt_q(coeff_rl.den, ctx.q)
        if den.is_zero():
            raise ZeroDivisionError("coefficient denominator vanishes at v = sqrt(q)")
        c = eval_sqrt_q(coeff_rl.num, ctx.q) / den
        acc = one(ctx)
        for sym in word:
            if sym not in binding:
                raise UnboundGenerator(f"no binding for generator {sym!r}")
            acc = hall_mul(ctx, acc, binding[sym])
        out = out + acc.scale(c)
    return out


RELATION_NAMES = ("1+", "2+", "1-", "2-", "1pm", "2pm", "3pm")


def verify_relations(ctx_pm: HallCtx, relation_set: Sequence[str] = RELATION_NAMES,
                     strict: bool = False) -> list[dict]:
    """Evaluate the requested relation families inside H(Lambda^pm).

    Families indexed by imaginary generators are reported vacuous: the
    contexts in scope are finite type, where no imaginary generators occur.
    """
    base = ctx_pm.base
    if base is None:
        raise UnknownClass("verify_relations needs a pm-doubled context")
    requested = list(RELATION_NAMES) if relation_set in ("all", ["all"], ("all",)) else list(relation_set)
    for r in requested:
        if r not in RELATION_NAMES:
            raise ValueError(f"unknown relation family {r!r}")
    s_base = base.species
    nv = s_base.nvertices()
    cm = cartan_from_graph(s_base.quiver.graph)
    report: list[dict] = []

    def u_plus(i: int) -> HallElem:
        return u(ctx_pm, ctx_pm.simple_id(i))

    def u_minus(i: int) -> HallElem:
        return u(ctx_pm, ctx_pm.simple_id(nv + i))

    def run(relation: str, instance: dict, expr: NCExpr, binding: dict[str, HallElem]):
        t0 = time.monotonic()
        residue = eval_nc(ctx_pm, expr, binding)
        ms = int((time.monotonic() - t0) * 1000)
        ok = residue.is_zero()
        report.append({
            "relation": relation, "instance": instance,
            "status": "ok" if ok else "violated",
            "residue_terms": len(residue.terms), "millis": ms,
        })
        if strict and not ok:
            raise RelationViolated(f"{relation} at {instance}: residue {residue!r}")

    def serre_expr(m: int, d: int) -> NCExpr:
        from .qlaurent import qbinom
        from .presver import RatLaurent

        out = NCExpr.zero()
        for p in range(m + 1):
            c = RatLaurent(qbinom(m, p, d))
            w = ("x",) * p + ("y",) + ("x",) * (m - p)
            out = out + NCExpr.word(w, c if p % 2 == 0 else -c)
        return out

    def commutator_expr() -> NCExpr:
        return NCExpr.word(("x", "y")) - NCExpr.word(("y", "x"))

    sym_euler = {}
    for i in range(nv):
        for j in range(nv):
            ei, ej = s_base.simple_dimvec(i), s_base.simple_dimvec(j)
            sym_euler[(i, j)] = euler_form(s_base, ei, ej) + euler_form(s_base, ej, ei)

    for rel in requested:
        if rel in ("1+", "1-"):
            sign = rel[1]
            found = False
            for i in range(nv):
                for j in range(nv):
                    if i == j:
                        continue
                    found = True
                    m = 1 - cm.entries[i][j]
                    gen = u_plus if sign == "+" else u_minus
                    run(rel, {"i": s_base.vertices[i], "j": s_base.vertices[j]},
                        serre_expr(m, s_base.d[i]), {"x": gen(i), "y": gen(j)})
            if not found:
                report.append({"relation": rel, "instance": {"note": "single vertex"},
                               "status": "vacuous", "residue_terms": 0, "millis": 0})
        elif rel in ("2+", "2-"):
            sign = rel[1]
            found = False
            for i in range(nv):
                for j in range(i + 1, nv):
                    if sym_euler[(i, j)] != 0:
                        continue
                    found = True
                    gen = u_plus if sign == "+" else u_minus
                    run(rel, {"i": s_base.vertices[i], "j": s_base.vertices[j]},
                        commutator_expr(), {"x": gen(i), "y": gen(j)})
            if not found:
                report.append({"relation": rel,
                               "instance": {"note": "no orthogonal real pairs; imaginary part vacuous"},
                               "status": "vacuous", "residue_terms": 0, "millis": 0})
        elif rel == "1pm":
            for i in range(nv):
                d_i = s_base.d[i]
                run(rel, {"i": s_base.vertices[i], "order": "+-"},
                    serre_expr(3, d_i), {"x": u_plus(i), "y": u_minus(i)})
                run(rel, {"i": s_base.vertices[i], "order": "-+"},
                    serre_expr(3, d_i), {"x": u_minus(i), "y": u_plus(i)})
        elif rel == "2pm":
            report.append({"relation": rel,
                           "instance": {"note": "indexed by imaginary generators only"},
                           "status": "vacuous", "residue_terms": 0, "millis": 0})
        elif rel == "3pm":
            found = False
            for i in range(nv):
                for j in range(nv):
                    if i == j:
                        continue
                    ei = _embed_dimvec(s_base, "+", s_base.simple_dimvec(i))
                    ej = _embed_dimvec(s_base, "-", s_base.simple_dimvec(j))
                    pm_pairing = (euler_form(ctx_pm.species, ei, ej)
                                  + euler_form(ctx_pm.species, ej, ei))
                    if pm_pairing != 0:
                        continue
                    found = True
                    run(rel, {"i": s_base.vertices[i], "j": s_base.vertices[j]},
                        commutator_expr(), {"x": u_plus(i), "y": u_minus(j)})
            if not found:
                report.append({"relation": rel, "instance": {"note": "no commuting pairs"},
                               "status": "vacuous", "residue_terms": 0, "millis": 0})
    return report
