"""Noncommutative presented-algebra rewriting for quantum Serre relation checking.

Expressions are finite sums of words over an abstract generator alphabet with
exact rational-Laurent coefficients.  The rewriting kernel handles the
fragment needed for mixed Serre sums: words over {E+, E-, K, K-} with at most
one E- per word, rewritten by the q-commutation of K past E and the
commutator substitution E+E- - E-E+ = (K - K^-1)/(v^d - v^-d).  The normal
form is a sum of words K^a E+^m (plus a residual E- slot that cancels for
every input the lemmas produce).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .qlaurent import LaurentPoly, qbinom, qint, v_power

EPLUS = "E+"
EMINUS = "E-"
KUP = "K"
KDOWN = "K-"

MAX_REDUCTION_STEPS = 10**6


class UnsupportedShape(Exception):
    """Input word falls outside the rewriting fragment (e.g. two E- symbols)."""


class ReductionCapExceeded(Exception):
    """The rewriting loop exceeded the step cap."""


def _poly_mod(a: list, b: list) -> list:
    """Remainder of dense polynomial division over Q (lowest degree first)."""
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and any(r):
        while r and not r[-1]:
            r.pop()
        if len(r) < len(b):
            break
        c = Fraction(r[-1]) / lead
        off = len(r) - len(b)
        for j, d in enumerate(b):
            r[off + j] -= c * d
        r.pop()
    while r and not r[-1]:
        r.pop()
    return r


def _poly_gcd(a: list, b: list) -> list:
    """Monic gcd over Q of dense polynomials, lowest degree first."""
    a, b = list(a), list(b)
    while any(b):
        a, b = b, _poly_mod(a, b)
    while a and not a[-1]:
        a.pop()
    if not a:
        return [Fraction(1)]
    lead = a[-1]
    return [Fraction(c) / lead for c in a]


class RatLaurent:
    """Fraction of Laurent polynomials in v, kept reduced and unit-normalized.

    The denominator is normalized to a monic polynomial with valuation 0, so
    structural equality of (num, den) is semantic equality.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        if isinstance(num, (int, Fraction)):
            num = LaurentPoly({0: num})
        if isinstance(den, (int, Fraction)):
            den = LaurentPoly({0: den})
        if den.is_zero():
            raise ZeroDivisionError("RatLaurent with zero denominator")
        if num.is_zero():
            self.num, self.den = LaurentPoly.zero(), LaurentPoly.one()
            return
        n0 = num.shift(-num.valuation())
        d0 = den.shift(-den.valuation())
        g = LaurentPoly(dict(enumerate(_poly_gcd(n0.coeffs_dense(), d0.coeffs_dense()))))
        num = num.divexact(g)
        den = den.divexact(g)
        unit = Fraction(1) / den.terms[den.degree()]
        k = den.valuation()
        self.num = num.shift(-k) * unit
        self.den = den.shift(-k) * unit

    @staticmethod
    def zero() -> "RatLaurent":
        return RatLaurent(0)

    @staticmethod
    def one() -> "RatLaurent":
        return RatLaurent(1)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _coerce(self, other) -> "RatLaurent":
        if isinstance(other, RatLaurent):
            return other
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return RatLaurent(other)
        raise TypeError(f"cannot coerce {type(other)!r} to RatLaurent")

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self) -> "RatLaurent":
        out = RatLaurent.__new__(RatLaurent)
        out.num, out.den = -self.num, self.den
        return out

    def __add__(self, other) -> "RatLaurent":
        o = self._coerce(other)
        return RatLaurent(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RatLaurent":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatLaurent":
        return (-self) + other

    def __mul__(self, other) -> "RatLaurent":
        o = self._coerce(other)
        return RatLaurent(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatLaurent":
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero RatLaurent")
        return RatLaurent(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "RatLaurent":
        return self._coerce(other) / self

    def __repr__(self) -> str:
        if self.den == LaurentPoly.one():
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


Word = tuple[str, ...]


class NCExpr:
    """Noncommutative polynomial: a finite RatLaurent-weighted sum of words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict[Word, RatLaurent]] = None):
        t: dict[Word, RatLaurent] = {}
        if terms:
            for w, c in terms.items():
                if not isinstance(c, RatLaurent):
                    c = RatLaurent(c)
                if not c.is_zero():
                    t[tuple(w)] = c
        self.terms = t

    @staticmethod
    def zero() -> "NCExpr":
        return NCExpr()

    @staticmethod
    def one() -> "NCExpr":
        return NCExpr({(): RatLaurent.one()})

    @staticmethod
    def word(symbols: Iterable[str], coeff=1) -> "NCExpr":
        return NCExpr({tuple(symbols): RatLaurent(coeff) if not isinstance(coeff, RatLaurent) else coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCExpr):
            return NotImplemented
        return self.terms == other.terms

    def __neg__(self) -> "NCExpr":
        return NCExpr({w: -c for w, c in self.terms.items()})

    def __add__(self, other) -> "NCExpr":
        if not isinstance(other, NCExpr):
            return NotImplemented
        t = dict(self.terms)
        for w, c in other.terms.items():
            s = t.get(w, RatLaurent.zero()) + c
            if s.is_zero():
                t.pop(w, None)
            else:
                t[w] = s
        out = NCExpr.__new__(NCExpr)
        out.terms = t
        return out

    def __sub__(self, other) -> "NCExpr":
        return self + (-other)

    def __mul__(self, other) -> "NCExpr":
        if isinstance(other, (int, Fraction, LaurentPoly, RatLaurent)):
            c0 = other if isinstance(other, RatLaurent) else RatLaurent(other)
            return NCExpr({w: c * c0 for w, c in self.terms.items()})
        if not isinstance(other, NCExpr):
            return NotImplemented
        t: dict[Word, RatLaurent] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                s = t.get(w, RatLaurent.zero()) + c1 * c2
                if s.is_zero():
                    t.pop(w, None)
                else:
                    t[w] = s
        out = NCExpr.__new__(NCExpr)
        out.terms = t
        return out

    def __rmul__(self, other) -> "NCExpr":
        if isinstance(other, (int, Fraction, LaurentPoly, RatLaurent)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "NCExpr":
        if n < 0:
            raise ValueError("negative powers are not defined in the free algebra")
        out = NCExpr.one()
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms):
            word = " ".join(w) if w else "1"
            bits.append(f"({self.terms[w]!r}) {word}")
        return " + ".join(bits)


@dataclass
class NormalElem:
    """Canonical form sum c_{a,m} K^a (E+)^m, plus a residual E- slot.

    ``minus_terms`` holds coefficients of words K^a E- (E+)^m; it is empty for
    every expression whose E- content cancels (all lemma inputs do).
    """

    terms: dict[tuple[int, int], RatLaurent] = field(default_factory=dict)
    minus_terms: dict[tuple[int, int], RatLaurent] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.terms and not self.minus_terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormalElem):
            return NotImplemented
        return self.terms == other.terms and self.minus_terms == other.minus_terms


Chooser = Callable[[list[tuple[Word, int, str]]], tuple[Word, int, str]]


def _candidates(word: Word, x: str, y: str) -> list[tuple[int, str]]:
    out = []
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if (a, b) in ((KUP, KDOWN), (KDOWN, KUP)):
            out.append((i, "cancel"))
        elif a in (x, y) and b in (KUP, KDOWN):
            out.append((i, "kswap"))
        elif a == x and b == y:
            out.append((i, "comm"))
    return out


def _reduce_kernel(
    expr: NCExpr,
    x: str,
    y: str,
    t: int,
    d: int,
    sign: int,
    chooser: Optional[Chooser] = None,
    trace: Optional[list] = None,
    max_steps: int = MAX_REDUCTION_STEPS,
) -> NCExpr:
    """Rewrite to the fixpoint where every word has shape K-block, y?, x-block.

    Rules: K x = v^t x K, K y = v^-t y K, and x y = y x + sign*(K - K^-1)/(v^d - v^-d).
    """
    comm = RatLaurent(sign, v_power(d) - v_power(-d))
    terms = dict(expr.terms)
    steps = 0
    while True:
        all_cands = []
        for w in sorted(terms):
            for i, kind in _candidates(w, x, y):
                all_cands.append((w, i, kind))
        if not all_cands:
            break
        w, i, kind = chooser(all_cands) if chooser else all_cands[0]
        steps += 1
        if steps > max_steps:
            raise ReductionCapExceeded(f"more than {max_steps} rewriting steps")
        if trace is not None:
            trace.append((kind, i, w))
        coeff = terms.pop(w)
        pieces: list[tuple[Word, RatLaurent]] = []
        a, b = w[i], w[i + 1]
        if kind == "cancel":
            pieces.append((w[:i] + w[i + 2:], RatLaurent.one()))
        elif kind == "kswap":
            if a == x:
                e = -t if b == KUP else t
            else:
                e = t if b == KUP else -t
            pieces.append((w[:i] + (b, a) + w[i + 2:], RatLaurent(v_power(e))))
        else:  # comm at (x, y)
            pieces.append((w[:i] + (y, x) + w[i + 2:], RatLaurent.one()))
            pieces.append((w[:i] + (KUP,) + w[i + 2:], comm))
            pieces.append((w[:i] + (KDOWN,) + w[i + 2:], -comm))
        for nw, scal in pieces:
            s = terms.get(nw, RatLaurent.zero()) + coeff * scal
            if s.is_zero():
                terms.pop(nw, None)
            else:
                terms[nw] = s
    out = NCExpr.__new__(NCExpr)
    out.terms = terms
    return out


def _to_normal(expr: NCExpr, x: str, y: str) -> NormalElem:
    norm = NormalElem()
    for w, c in expr.terms.items():
        i = 0
        a = 0
        while i < len(w) and w[i] in (KUP, KDOWN):
            a += 1 if w[i] == KUP else -1
            i += 1
        eps = 0
        if i < len(w) and w[i] == y:
            eps = 1
            i += 1
        m = 0
        while i < len(w) and w[i] == x:
            m += 1
            i += 1
        if i != len(w):
            raise AssertionError(f"word {w} is not in normal shape")
        target = norm.minus_terms if eps else norm.terms
        key = (a, m)
        s = target.get(key, RatLaurent.zero()) + c
        if s.is_zero():
            target.pop(key, None)
        else:
            target[key] = s
    return norm


def reduce_mixed(
    e: NCExpr,
    d: int = 1,
    exponent: int = 2,
    chooser: Optional[Chooser] = None,
    trace: Optional[list] = None,
) -> NormalElem:
    """Reduce a sum of words over {E+, E-, K, K-} with at most one E- per word.

    Uses K E+ = v^(exponent*d) E+ K and the commutator substitution with
    denominator v^d - v^-d; the result is canonical for the chosen rules and
    independent of the rewriting order.
    """
    if exponent <= 0 or exponent % 2:
        raise ValueError("exponent must be a positive even integer")
    alphabet = {EPLUS, EMINUS, KUP, KDOWN}
    for w in e.terms:
        bad = [s for s in w if s not in alphabet]
        if bad:
            raise UnsupportedShape(f"unknown symbols {bad} in word {w}")
        if sum(1 for s in w if s == EMINUS) > 1:
            raise UnsupportedShape(f"word {w} has more than one E-")
    reduced = _reduce_kernel(e, EPLUS, EMINUS, exponent * d, d, 1, chooser, trace)
    return _to_normal(reduced, EPLUS, EMINUS)


def reduce_mixed_mirror(
    e: NCExpr,
    d: int = 1,
    exponent: int = 2,
    chooser: Optional[Chooser] = None,
    trace: Optional[list] = None,
) -> NormalElem:
    """Mirror reduction: roles of E+ and E- swapped, K-exponent negated.

    Normal words have shape K^a E+? (E-)^m; the returned NormalElem indexes
    the E- power in the m slot and flags a surviving E+ in minus_terms.
    """
    if exponent <= 0 or exponent % 2:
        raise ValueError("exponent must be a positive even integer")
    for w in e.terms:
        if sum(1 for s in w if s == EPLUS) > 1:
            raise UnsupportedShape(f"word {w} has more than one E+")
    reduced = _reduce_kernel(e, EMINUS, EPLUS, -exponent * d, d, -1, chooser, trace)
    return _to_normal(reduced, EMINUS, EPLUS)


def serre_mixed_expr(n: int, d: int = 1) -> NCExpr:
    """The alternating sum over p of [2n+1 choose p]_d (E+)^p E- (E+)^(2n+1-p)."""
    if n < 1:
        raise ValueError("n must be positive")
    N = 2 * n + 1
    out = NCExpr.zero()
    for p in range(N + 1):
        w = (EPLUS,) * p + (EMINUS,) + (EPLUS,) * (N - p)
        c = RatLaurent(qbinom(N, p, d))
        out = out + NCExpr.word(w, c if p % 2 == 0 else -c)
    return out


def serre_mixed_expr_mirror(n: int, d: int = 1) -> NCExpr:
    """Same sum with the roles of E+ and E- exchanged."""
    if n < 1:
        raise ValueError("n must be positive")
    N = 2 * n + 1
    out = NCExpr.zero()
    for p in range(N + 1):
        w = (EMINUS,) * p + (EPLUS,) + (EMINUS,) * (N - p)
        c = RatLaurent(qbinom(N, p, d))
        out = out + NCExpr.word(w, c if p % 2 == 0 else -c)
    return out


@dataclass
class Lemma41Result:
    ok: bool
    steps_plus: int
    steps_minus: int


def check_lemma_41(n: int, d: int = 1, n_bound: int = 8) -> Lemma41Result:
    """Reduce both orientations of the degree-(2n+1) mixed Serre sum to zero."""
    if not 1 <= n <= n_bound:
        raise ValueError(f"n must lie in 1..{n_bound}")
    trace_p: list = []
    trace_m: list = []
    plus = reduce_mixed(serre_mixed_expr(n, d), d, 2, trace=trace_p)
    minus = reduce_mixed_mirror(serre_mixed_expr_mirror(n, d), d, 2, trace=trace_m)
    return Lemma41Result(plus.is_zero() and minus.is_zero(), len(trace_p), len(trace_m))


def check_s2(m: int) -> bool:
    """Exact telescoping identity x^m y - y x^m = sum x^a (xy - yx) x^(m-1-a)."""
    if m < 1:
        raise ValueError("m must be positive")
    X, Y = NCExpr.word(("x",)), NCExpr.word(("y",))
    lhs = X**m * Y - Y * X**m
    comm = X * Y - Y * X
    rhs = NCExpr.zero()
    for a in range(m):
        rhs = rhs + X**a * comm * X ** (m - 1 - a)
    return lhs == rhs


def check_s2_reduction(n: int, d: int = 1) -> bool:
    """Pairing step: the full alternating Serre sum equals its folded half-sum."""
    if n < 1:
        raise ValueError("n must be positive")
    N = 2 * n + 1
    X, Y = NCExpr.word(("x",)), NCExpr.word(("y",))
    lhs = NCExpr.zero()
    for p in range(N + 1):
        term = X**p * Y * X ** (N - p) * RatLaurent(qbinom(N, p, d))
        lhs = lhs + (term if p % 2 == 0 else -term)
    rhs = NCExpr.zero()
    for p in range(n + 1):
        inner = X ** (N - 2 * p) * Y - Y * X ** (N - 2 * p)
        term = X**p * inner * X**p * RatLaurent(qbinom(N, p, d))
        rhs = rhs + (-term if p % 2 == 0 else term)
    return lhs == rhs


def check_term_A(n: int, p: int) -> bool:
    """Collapse of the K-in-the-middle sum to [2(n-p)+1] (E+)^n K (E+)^n."""
    if not 0 <= p <= n:
        raise ValueError("need 0 <= p <= n")
    lhs = NCExpr.zero()
    for a in range(2 * n - 2 * p + 1):
        lhs = lhs + NCExpr.word((EPLUS,) * (p + a) + (KUP,) + (EPLUS,) * (2 * n - p - a))
    rhs = NCExpr.word((EPLUS,) * n + (KUP,) + (EPLUS,) * n) * RatLaurent(qint(2 * (n - p) + 1))
    return reduce_mixed(lhs) == reduce_mixed(rhs)
