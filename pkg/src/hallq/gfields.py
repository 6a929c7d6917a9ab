"""Small finite fields GF(p^s), their embeddings, and exact linear algebra over them.

Field elements are ints in [0, p^s) encoding polynomial residues base p
(little-endian digits = coefficients of 1, x, x^2, ...).  Moduli come from a
fixed in-source table for p in {2, 3, 5, 7} and s <= 4, so element encodings
are reproducible across runs.  Matrices are tuples of row tuples of ints.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product as iproduct
from typing import Iterator, Optional, Sequence


class FieldTableMiss(Exception):
    """Requested field is outside the fixed modulus table."""


# monic irreducible moduli, little-endian coefficients including the leading 1
MODULUS_TABLE: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (0, 1),
    (2, 2): (1, 1, 1),          # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),       # x^3 + x + 1
    (2, 4): (1, 1, 0, 0, 1),    # x^4 + x + 1
    (3, 1): (0, 1),
    (3, 2): (1, 0, 1),          # x^2 + 1
    (3, 3): (1, 2, 0, 1),       # x^3 + 2x + 1
    (3, 4): (2, 1, 0, 0, 1),    # x^4 + x + 2
    (5, 1): (0, 1),
    (5, 2): (2, 0, 1),          # x^2 + 2
    (5, 3): (1, 1, 0, 1),       # x^3 + x + 1
    (5, 4): (2, 0, 0, 0, 1),    # x^4 + 2
    (7, 1): (0, 1),
    (7, 2): (1, 0, 1),          # x^2 + 1
    (7, 3): (2, 0, 0, 1),       # x^3 + 2
    (7, 4): (1, 1, 0, 0, 1),    # x^4 + x + 1
}

_TABLE_LIMIT = 64  # build dense add/mul tables up to this field size


def _digits(n: int, p: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(n % p)
        n //= p
    return out


def _undigits(ds: Sequence[int], p: int) -> int:
    n = 0
    for d in reversed(ds):
        n = n * p + d
    return n


class GFq:
    """The finite field with p^s elements realized by the table modulus."""

    def __init__(self, p: int, s: int):
        if (p, s) not in MODULUS_TABLE:
            raise FieldTableMiss(f"no modulus on record for GF({p}^{s})")
        self.p = p
        self.s = s
        self.q = p**s
        self.modulus = MODULUS_TABLE[(p, s)]
        self._check_modulus()
        self._build_tables()

    # -- construction helpers -------------------------------------------------

    def _poly_mulmod(self, a: int, b: int) -> int:
        p, s = self.p, self.s
        da, db = _digits(a, p, s), _digits(b, p, s)
        conv = [0] * (2 * s - 1 if s > 1 else 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    conv[i + j] = (conv[i + j] + x * y) % p
        # reduce by the monic modulus
        for k in range(len(conv) - 1, s - 1, -1):
            c = conv[k]
            if c:
                conv[k] = 0
                for j in range(s + 1):
                    conv[k - s + j] = (conv[k - s + j] - c * self.modulus[j]) % p
        return _undigits(conv[:s], p)

    def _check_modulus(self):
        """Trial division: the table entry must be irreducible over F_p."""
        p, s = self.p, self.s
        if s == 1:
            return
        for deg in range(1, s // 2 + 1):
            for tail in iproduct(range(p), repeat=deg):
                div = list(tail) + [1]
                rem = list(self.modulus)
                while len(rem) > deg and any(rem):
                    while rem and rem[-1] == 0:
                        rem.pop()
                    if len(rem) <= deg:
                        break
                    c = rem[-1]
                    off = len(rem) - len(div)
                    for j, d in enumerate(div):
                        rem[off + j] = (rem[off + j] - c * d) % p
                    rem.pop()
                if not any(rem):
                    raise AssertionError(f"modulus for GF({p}^{s}) is reducible")

    def _build_tables(self):
        q = self.q
        # exp/log over a deterministic multiplicative generator
        self.exp = [1] * max(q - 1, 1)
        self.log = [0] * q
        gen = None
        for cand in range(1, q):
            seen = {1}
            x = 1
            for _ in range(q - 2):
                x = self._poly_mulmod(x, cand)
                if x in seen:
                    break
                seen.add(x)
            if len(seen) == q - 1:
                gen = cand
                break
        if gen is None:  # q == 2
            gen = 1
        self.generator = gen
        x = 1
        for k in range(q - 1):
            self.exp[k] = x
            self.log[x] = k
            x = self._poly_mulmod(x, gen)
        self._add_table: Optional[list[list[int]]] = None
        self._mul_table: Optional[list[list[int]]] = None
        if q <= _TABLE_LIMIT:
            self._add_table = [[self._add_slow(a, b) for b in range(q)] for a in range(q)]
            self._mul_table = [[self._poly_mulmod(a, b) for b in range(q)] for a in range(q)]

    # -- arithmetic ------------------------------------------------------------

    def _add_slow(self, a: int, b: int) -> int:
        p = self.p
        if self.s == 1:
            return (a + b) % p
        da, db = _digits(a, p, self.s), _digits(b, p, self.s)
        return _undigits([(x + y) % p for x, y in zip(da, db)], p)

    def add(self, a: int, b: int) -> int:
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_slow(a, b)

    def neg(self, a: int) -> int:
        p = self.p
        if self.s == 1:
            return (-a) % p
        return _undigits([(-d) % p for d in _digits(a, p, self.s)], p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a][b]
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError("negative power of 0")
            return 0
        return self.exp[(self.log[a] * k) % (self.q - 1)]

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def elements(self) -> range:
        return range(self.q)

    def __eq__(self, other):
        return isinstance(other, GFq) and (self.p, self.s) == (other.p, other.s)

    def __hash__(self):
        return hash((self.p, self.s))

    def __repr__(self):
        return f"GF({self.p}^{self.s})" if self.s > 1 else f"GF({self.p})"


def factor_prime_power(q: int) -> tuple[int, int]:
    """q = p^e with p prime, or ValueError."""
    if q < 2:
        raise ValueError("q must be at least 2")
    for p in (2, 3, 5, 7, 11, 13):
        if q % p == 0:
            e = 0
            while q % p == 0:
                q //= p
                e += 1
            if q != 1:
                raise ValueError("not a prime power")
            return p, e
    n = q
    p = None
    d = 2
    while d * d <= n:
        if n % d == 0:
            p = d
            break
        d += 1
    p = p or n
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    if q != 1:
        raise ValueError("not a prime power")
    return p, e


@lru_cache(maxsize=None)
def gf(p: int, s: int) -> GFq:
    """Shared field instances (construction builds tables; cache them)."""
    return GFq(p, s)


class RelExt:
    """The extension big/small of degree d with the power basis of the big generator.

    Provides the subfield embedding, coordinates of big-field elements over
    the small field, and multiplication matrices (the regular representation).
    """

    def __init__(self, big: GFq, small: GFq):
        if big.p != small.p or big.s % small.s:
            raise FieldTableMiss(f"{small!r} does not embed into {big!r}")
        self.big = big
        self.small = small
        self.d = big.s // small.s
        self._iota = self._find_embedding()
        self._basis_inv = self._coordinate_solver()
        self._mult_cache: dict[int, tuple[tuple[int, ...], ...]] = {}

    def _find_embedding(self) -> list[int]:
        big, small = self.big, self.small
        if small.s == big.s:
            return list(range(small.q))
        # first root (in element order) of the small modulus inside the big field
        root = None
        for cand in range(big.q):
            acc = 0
            for s_, coeff in enumerate(small.modulus):
                if coeff:
                    acc = big.add(acc, big.mul(coeff, big.pow(cand, s_)))
            if acc == 0:
                root = cand
                break
        if root is None:  # pragma: no cover - cannot happen for true subfields
            raise AssertionError("small modulus has no root in the big field")
        table = []
        for a in range(small.q):
            img = 0
            for s_, coeff in enumerate(_digits(a, small.p, small.s)):
                if coeff:
                    img = big.add(img, big.mul(coeff, big.pow(root, s_)))
            table.append(img)
        return table

    def iota(self, a: int) -> int:
        """Embed a small-field element into the big field."""
        return self._iota[a]

    def _coordinate_solver(self):
        big, small, d = self.big, self.small, self.d
        p, M = big.p, big.s
        z = big.p if big.s > 1 else 0  # class of x in the big field
        y = small.p if small.s > 1 else 1  # generator of the small field over F_p
        cols = []
        for t in range(d):
            zt = big.pow(z, t) if big.s > 1 else 1
            for s_ in range(small.s):
                b = big.mul(self.iota(small.pow(y, s_) if small.s > 1 else 1), zt)
                cols.append(_digits(b, p, M))
        fp = gf(p, 1)
        B = tuple(tuple(cols[j][i] for j in range(M)) for i in range(M))
        inv = mat_inv(fp, B)
        if inv is None:  # pragma: no cover - basis property guarantees invertibility
            raise AssertionError("power basis matrix is singular")
        return inv

    def coords(self, x: int) -> tuple[int, ...]:
        """Coordinates of a big-field element in the z-power basis over the small field."""
        big, small = self.big, self.small
        p = big.p
        fp = gf(p, 1)
        lam = mat_vec(fp, self._basis_inv, tuple(_digits(x, p, big.s)))
        out = []
        for t in range(self.d):
            out.append(_undigits(lam[t * small.s:(t + 1) * small.s], p))
        return tuple(out)

    def from_coords(self, cs: Sequence[int]) -> int:
        big = self.big
        z = big.p if big.s > 1 else 0
        acc = 0
        for t, c in enumerate(cs):
            zt = big.pow(z, t) if big.s > 1 else 1
            acc = big.add(acc, big.mul(self.iota(c), zt))
        return acc

    def mult_matrix(self, f: int) -> tuple[tuple[int, ...], ...]:
        """d x d matrix over the small field of multiplication by f on the big field."""
        cached = self._mult_cache.get(f)
        if cached is not None:
            return cached
        big = self.big
        z = big.p if big.s > 1 else 0
        cols = []
        for t in range(self.d):
            zt = big.pow(z, t) if big.s > 1 else 1
            cols.append(self.coords(big.mul(f, zt)))
        mat = tuple(tuple(cols[t][r] for t in range(self.d)) for r in range(self.d))
        self._mult_cache[f] = mat
        return mat


Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zero_matrix(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def mat_mul(F: GFq, A: Matrix, B: Matrix) -> Matrix:
    if A and B and len(A[0]) != len(B):
        raise ValueError("matrix shape mismatch")
    if not A:
        return ()
    if not B:
        return tuple(() for _ in A)
    cols = len(B[0])
    out = []
    add, mul = F.add, F.mul
    for row in A:
        new = [0] * cols
        for k, a in enumerate(row):
            if a:
                bk = B[k]
                for j in range(cols):
                    if bk[j]:
                        new[j] = add(new[j], mul(a, bk[j]))
        out.append(tuple(new))
    return tuple(out)


def mat_vec(F: GFq, A: Matrix, v: Vector) -> Vector:
    add, mul = F.add, F.mul
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            if a and x:
                acc = add(acc, mul(a, x))
        out.append(acc)
    return tuple(out)


def mat_add(F: GFq, A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(F.add(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def rref(F: GFq, A: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    rows = [list(r) for r in A]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, m):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    nonzero = [tuple(row) for row in rows if any(row)]
    return tuple(nonzero), tuple(pivots)


def rank(F: GFq, A: Matrix) -> int:
    return len(rref(F, A)[0])


def mat_inv(F: GFq, A: Matrix) -> Optional[Matrix]:
    n = len(A)
    if n == 0:
        return ()
    aug = tuple(tuple(A[i]) + tuple(identity(n)[i]) for i in range(n))
    R, pivots = rref(F, aug)
    if len(R) != n or pivots != tuple(range(n)):
        return None
    return tuple(tuple(row[n:]) for row in R)


def reduce_vector(F: GFq, basis: Matrix, pivots: Sequence[int], v: Vector) -> tuple[Vector, Vector]:
    """Express v against an RREF basis: (coefficients, residual)."""
    res = list(v)
    coeffs = []
    for row, pc in zip(basis, pivots):
        c = res[pc]
        coeffs.append(c)
        if c:
            for j, x in enumerate(row):
                if x:
                    res[j] = F.sub(res[j], F.mul(c, x))
    return tuple(coeffs), tuple(res)


def in_span(F: GFq, basis: Matrix, pivots: Sequence[int], v: Vector) -> bool:
    return not any(reduce_vector(F, basis, pivots, v)[1])


def nullspace(F: GFq, A: Matrix) -> list[Vector]:
    """Basis of the right nullspace."""
    if not A:
        return []
    n = len(A[0])
    R, pivots = rref(F, A)
    free = [c for c in range(n) if c not in pivots]
    out = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for row, pc in zip(R, pivots):
            v[pc] = F.neg(row[fc])
        out.append(tuple(v))
    return out


def subspace_bases(F: GFq, n: int) -> Iterator[Matrix]:
    """All subspaces of F^n as RREF basis matrices (the 0 space is the empty matrix)."""
    yield ()
    for r in range(1, n + 1):
        for pivots in _combinations(n, r):
            free_pos = []
            for i, pc in enumerate(pivots):
                for c in range(pc + 1, n):
                    if c not in pivots:
                        free_pos.append((i, c))
            for assign in iproduct(F.elements(), repeat=len(free_pos)):
                rows = [[0] * n for _ in range(r)]
                for i, pc in enumerate(pivots):
                    rows[i][pc] = 1
                for (i, c), val in zip(free_pos, assign):
                    rows[i][c] = val
                yield tuple(tuple(row) for row in rows)


def _combinations(n: int, r: int):
    from itertools import combinations

    return combinations(range(n), r)


def gl_order(Q: int, n: int) -> int:
    """|GL_n(F_Q)| = prod (Q^n - Q^s)."""
    out = 1
    for s in range(n):
        out *= Q**n - Q**s
    return out


def gl_generators(F: GFq, n: int) -> list[tuple[Matrix, Matrix]]:
    """Generating set of GL_n(F) as (g, g^-1) pairs: transvections, dilations, swaps."""
    gens: list[tuple[Matrix, Matrix]] = []
    if n == 0:
        return gens
    base = [list(r) for r in identity(n)]
    for r in range(n):
        for s in range(n):
            if r == s:
                continue
            for lam in range(1, F.q):
                g = [row[:] for row in base]
                g[r][s] = lam
                ginv = [row[:] for row in base]
                ginv[r][s] = F.neg(lam)
                gens.append((tuple(map(tuple, g)), tuple(map(tuple, ginv))))
    for r in range(n):
        for u in range(2, F.q):
            g = [row[:] for row in base]
            g[r][r] = u
            ginv = [row[:] for row in base]
            ginv[r][r] = F.inv(u)
            gens.append((tuple(map(tuple, g)), tuple(map(tuple, ginv))))
    for r in range(n):
        for s in range(r + 1, n):
            g = [row[:] for row in base]
            g[r][r] = g[s][s] = 0
            g[r][s] = g[s][r] = 1
            tg = tuple(map(tuple, g))
            gens.append((tg, tg))
    return gens
