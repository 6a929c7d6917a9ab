"""Exact arithmetic in Z[v, v^-1] and the balanced quantum combinatorics on top of it.

Everything here is exact: coefficients are arbitrary-precision rationals,
division either succeeds without remainder or raises.  The module also
provides the quadratic ring Q(sqrt(q)) used to specialize v at the square
root of a finite field size.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Mapping, Optional


class ExactDivisionError(ArithmeticError):
    """A quotient that must be exact left a remainder."""


class IdentityViolation(Exception):
    """A checked algebraic identity failed; this is a theorem check, not plumbing."""


class LaurentPoly:
    """Laurent polynomial in one variable v with Fraction coefficients.

    Sparse map {exponent: coefficient}; zero coefficients are never stored,
    so dict equality is semantic equality.  Instances are treated as
    immutable.

    >>> (v_power(1) + v_power(-1)) * (v_power(1) - v_power(-1)) == v_power(2) - v_power(-2)
    True
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[int, Fraction | int]] = None):
        # Coefficients are ints whenever integral (fast path) and Fractions
        # otherwise; int and Fraction compare and hash consistently.
        t: dict[int, Fraction | int] = {}
        if terms:
            for e, c in terms.items():
                if not isinstance(c, int):
                    c = Fraction(c)
                    if c.denominator == 1:
                        c = c.numerator
                if c:
                    t[int(e)] = c
        self.terms = t

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly({0: 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            elif e in t:
                del t[e]
        out = LaurentPoly()
        out.terms = t
        return out

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-other if isinstance(other, LaurentPoly) else LaurentPoly({0: -other}))

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({e: c * other for e, c in self.terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        t: dict[int, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = t.get(e, 0) + c1 * c2
                if s:
                    t[e] = s
                elif e in t:
                    del t[e]
        out = LaurentPoly()
        out.terms = t
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative powers of a general Laurent polynomial are not defined")
        out = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by v^k."""
        return LaurentPoly({e + k: c for e, c in self.terms.items()})

    def bar(self) -> "LaurentPoly":
        """The involution v -> v^-1."""
        return LaurentPoly({-e: c for e, c in self.terms.items()})

    def valuation(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no valuation")
        return min(self.terms)

    def degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return max(self.terms)

    def coeffs_dense(self) -> list[Fraction]:
        """Coefficients from the valuation upward, as a dense list."""
        lo, hi = self.valuation(), self.degree()
        return [self.terms.get(e, 0) for e in range(lo, hi + 1)]

    def divexact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient self/other; raises ExactDivisionError on any remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly.zero()
        num = self.coeffs_dense()
        den = other.coeffs_dense()
        shift = self.valuation() - other.valuation()
        if len(num) < len(den):
            raise ExactDivisionError("quotient would not be polynomial")
        quot: list = [0] * (len(num) - len(den) + 1)
        rem = list(num)
        lead = den[-1]
        for k in range(len(quot) - 1, -1, -1):
            c = Fraction(rem[k + len(den) - 1]) / lead
            quot[k] = c
            if c:
                for j, d in enumerate(den):
                    rem[k + j] -= c * d
        if any(rem):
            raise ExactDivisionError("inexact Laurent division")
        return LaurentPoly({shift + k: c for k, c in enumerate(quot)})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            if e == 0:
                parts.append(str(c))
            else:
                ve = "v" if e == 1 else f"v^{e}"
                if c == 1:
                    parts.append(ve)
                elif c == -1:
                    parts.append(f"-{ve}")
                else:
                    parts.append(f"{c}*{ve}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


def v_power(e: int, c: Fraction | int = 1) -> LaurentPoly:
    """The monomial c*v^e."""
    return LaurentPoly({e: c})


def qint(m: int, d: int = 1) -> LaurentPoly:
    """Balanced quantum integer [m] in v_i = v^d, i.e. (v_i^m - v_i^-m)/(v_i - v_i^-1).

    Negative m gives -[-m], forced by the defining formula.

    >>> qint(3, 1)
    v^2 + 1 + v^-2
    """
    if d <= 0:
        raise ValueError("symmetrizer exponent d must be positive")
    if m == 0:
        return LaurentPoly.zero()
    if m < 0:
        return -qint(-m, d)
    return LaurentPoly({d * (m - 1 - 2 * t): 1 for t in range(m)})


@lru_cache(maxsize=None)
def qfact(m: int, d: int = 1) -> LaurentPoly:
    """Quantum factorial [m]^! = [1][2]...[m]; the empty product is 1.

    Results are cached and shared; LaurentPoly values must not be mutated.
    """
    if m < 0:
        raise ValueError("quantum factorial needs m >= 0")
    if m == 0:
        return LaurentPoly.one()
    return qfact(m - 1, d) * qint(m, d)


@lru_cache(maxsize=None)
def qbinom(m: int, t: int, d: int = 1) -> LaurentPoly:
    """Balanced quantum binomial [m]^!/([t]^! [m-t]^!), always an exact quotient.

    Computed by the stepwise product [m choose s] = [m choose s-1][m-s+1]/[s],
    which keeps every intermediate division small; each step is checked to be
    exact.

    >>> qbinom(3, 1, 1)
    v^2 + 1 + v^-2
    """
    if not 0 <= t <= m:
        raise ValueError("need 0 <= t <= m")
    t = min(t, m - t)
    out = LaurentPoly.one()
    try:
        for s in range(1, t + 1):
            out = (out * qint(m - s + 1, d)).divexact(qint(s, d))
    except ExactDivisionError as exc:  # pragma: no cover - internal consistency fault
        raise AssertionError("quantum binomial failed to divide exactly") from exc
    return out


def b_partial_sum(n: int, i: int) -> LaurentPoly:
    """Partial alternating sum B_{n,i} of binomial-weighted odd quantum integers.

    B_{n,i} = sum_{p=n-i+1}^{n} (-1)^p [2n+1 choose p] [2(n-p)+1], so that
    B_{n,n} = -[2n+1].
    """
    if not 1 <= i <= n:
        raise ValueError("need 1 <= i <= n")
    out = LaurentPoly.zero()
    for p in range(n - i + 1, n + 1):
        term = qbinom(2 * n + 1, p) * qint(2 * (n - p) + 1)
        out = out + (term if p % 2 == 0 else -term)
    return out


def b_closed_form(n: int, i: int) -> LaurentPoly:
    """Closed form -(-1)^(n-i) [2n+1 choose n-i] [n+i+1][i]/[n] for B_{n,i}.

    The division by [n] must be exact; if it is not, the identity itself is
    violated and IdentityViolation is raised.
    """
    if not 1 <= i <= n:
        raise ValueError("need 1 <= i <= n")
    num = qbinom(2 * n + 1, n - i) * qint(n + i + 1) * qint(i)
    try:
        quot = num.divexact(qint(n))
    except ExactDivisionError as exc:
        raise IdentityViolation(f"[n] does not divide the closed-form numerator at (n,i)=({n},{i})") from exc
    return quot if (n - i) % 2 == 1 else -quot


def check_identity_4_2(n: int, i: int) -> bool:
    """Exact check of [2i+1][n] - [n+i+1][i] = [n-i][i+1]."""
    if not 1 <= i <= n:
        raise ValueError("need 1 <= i <= n")
    lhs = qint(2 * i + 1) * qint(n) - qint(n + i + 1) * qint(i)
    rhs = qint(n - i) * qint(i + 1)
    return lhs == rhs


def _frac_sqrt(x: Fraction) -> Optional[Fraction]:
    """Exact square root of a rational, or None."""
    if x < 0:
        return None
    rn, rd = isqrt(x.numerator), isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


class QScalar:
    """Element a + b*sqrt(q) of the quadratic ring Q(sqrt(q)), exact.

    If q is a perfect square the sqrt(q) part is folded into the rational
    part, so b is then always 0.  For non-square q this is a field and
    division is exact.
    """

    __slots__ = ("a", "b", "q")

    def __init__(self, a, b, q: int):
        if q < 1:
            raise ValueError("q must be a positive integer")
        a, b = Fraction(a), Fraction(b)
        r = isqrt(q)
        if r * r == q and b:
            a, b = a + b * r, Fraction(0)
        self.a, self.b, self.q = a, b, q

    @staticmethod
    def of(x, q: int) -> "QScalar":
        return QScalar(x, 0, q)

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def _coerce(self, other) -> "QScalar":
        if isinstance(other, QScalar):
            if other.q != self.q:
                raise ValueError(f"mixing QScalars over q={self.q} and q={other.q}")
            return other
        return QScalar(other, 0, self.q)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QScalar(other, 0, self.q)
        if not isinstance(other, QScalar):
            return NotImplemented
        return self.q == other.q and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b, self.q))

    def __neg__(self) -> "QScalar":
        return QScalar(-self.a, -self.b, self.q)

    def __add__(self, other) -> "QScalar":
        o = self._coerce(other)
        return QScalar(self.a + o.a, self.b + o.b, self.q)

    __radd__ = __add__

    def __sub__(self, other) -> "QScalar":
        o = self._coerce(other)
        return QScalar(self.a - o.a, self.b - o.b, self.q)

    def __rsub__(self, other) -> "QScalar":
        return (-self) + other

    def __mul__(self, other) -> "QScalar":
        o = self._coerce(other)
        return QScalar(self.a * o.a + self.b * o.b * self.q, self.a * o.b + self.b * o.a, self.q)

    __rmul__ = __mul__

    def inverse(self) -> "QScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero QScalar")
        den = self.a * self.a - self.b * self.b * self.q
        if not den:  # can only happen when q is a perfect square, where b == 0
            raise ZeroDivisionError("inverse of zero QScalar")
        return QScalar(self.a / den, -self.b / den, self.q)

    def __truediv__(self, other) -> "QScalar":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "QScalar":
        return self._coerce(other) * self.inverse()

    def sqrt(self) -> Optional["QScalar"]:
        """A square root inside Q(sqrt(q)) if one exists, else None."""
        if self.is_zero():
            return QScalar(0, 0, self.q)
        if not self.b:
            r = _frac_sqrt(self.a)
            if r is not None:
                return QScalar(r, 0, self.q)
            r = _frac_sqrt(self.a / self.q)
            if r is not None:
                return QScalar(0, r, self.q)
            return None
        # (x + y*sqrt(q))^2 = c + d*sqrt(q): x^2 = (c +- sqrt(c^2 - d^2 q))/2, y = d/(2x)
        disc = _frac_sqrt(self.a * self.a - self.b * self.b * self.q)
        if disc is None:
            return None
        for x2 in ((self.a + disc) / 2, (self.a - disc) / 2):
            x = _frac_sqrt(x2)
            if x:
                y = self.b / (2 * x)
                cand = QScalar(x, y, self.q)
                if cand * cand == self:
                    return cand
        return None

    def __repr__(self) -> str:
        if not self.b:
            return f"{self.a}"
        if not self.a:
            return f"{self.b}*sqrt({self.q})"
        return f"{self.a} + {self.b}*sqrt({self.q})"


def sqrt_q_power(q: int, m: int) -> QScalar:
    """The value of v^m at v = sqrt(q), as an exact QScalar."""
    if m % 2 == 0:
        return QScalar(Fraction(q) ** (m // 2), 0, q)
    return QScalar(0, Fraction(q) ** ((m - 1) // 2), q)


def eval_sqrt_q(p: LaurentPoly, q: int) -> QScalar:
    """Evaluate a Laurent polynomial at v = sqrt(q) exactly.

    Even exponents land in the rational part, odd exponents in the sqrt(q)
    part.
    """
    if q < 2:
        raise ValueError("specialization needs q >= 2")
    a = Fraction(0)
    b = Fraction(0)
    for e, c in p.terms.items():
        if e % 2 == 0:
            a += c * Fraction(q) ** (e // 2)
        else:
            b += c * Fraction(q) ** ((e - 1) // 2)
    return QScalar(a, b, q)
