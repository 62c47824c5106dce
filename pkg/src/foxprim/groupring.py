"""Exact arithmetic in ZF_n and in the Laurent ring Z[x_1^±, ..., x_n^±].

Coefficients are Python ints (unbounded). Ring elements are sparse maps with
no zero coefficients stored; both classes are treated as immutable values.
"""
from __future__ import annotations

import re
from collections import defaultdict
from typing import Iterable, Iterator

from .words import (
    Letters,
    RankError,
    ParseError,
    Word,
    check_rank,
    format_letters,
    inv_letters,
    mul_letters,
    parse_letters,
    reduce_letters,
    shortlex_key,
)


def _clean(d: dict) -> dict:
    return {k: c for k, c in d.items() if c}


class RingElement:
    """A finite Z-linear combination of reduced words."""

    __slots__ = ("rank", "terms")

    def __init__(self, terms: dict | None = None, rank: int = 2):
        check_rank(rank)
        self.rank = rank
        self.terms: dict[Letters, int] = _clean(terms or {})

    @classmethod
    def from_word(cls, w: Word, coeff: int = 1) -> "RingElement":
        return cls({w.letters: coeff}, w.rank)

    @classmethod
    def constant(cls, c: int, rank: int) -> "RingElement":
        return cls({(): c}, rank)

    @classmethod
    def zero(cls, rank: int) -> "RingElement":
        return cls({}, rank)

    @classmethod
    def one(cls, rank: int) -> "RingElement":
        return cls({(): 1}, rank)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, Letters]], rank: int) -> "RingElement":
        acc: dict[Letters, int] = defaultdict(int)
        for c, t in pairs:
            acc[reduce_letters(t)] += c
        return cls(acc, rank)

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, int):
            return RingElement.constant(other, self.rank)
        if isinstance(other, Word):
            other = RingElement.from_word(other)
        if not isinstance(other, RingElement):
            raise TypeError(f"cannot combine RingElement with {type(other).__name__}")
        if other.rank != self.rank:
            raise RankError(f"rank mismatch: {self.rank} vs {other.rank}")
        return other

    def __add__(self, other) -> "RingElement":
        other = self._coerce(other)
        d = dict(self.terms)
        for k, c in other.terms.items():
            d[k] = d.get(k, 0) + c
        return RingElement(d, self.rank)

    __radd__ = __add__

    def __neg__(self) -> "RingElement":
        return RingElement({k: -c for k, c in self.terms.items()}, self.rank)

    def __sub__(self, other) -> "RingElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RingElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RingElement":
        if isinstance(other, int):
            return RingElement({k: c * other for k, c in self.terms.items()}, self.rank)
        other = self._coerce(other)
        d: dict[Letters, int] = defaultdict(int)
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                d[mul_letters(a, b)] += ca * cb
        return RingElement(d, self.rank)

    def __rmul__(self, other) -> "RingElement":
        return self._coerce(other) * self

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = RingElement.constant(other, self.rank)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def items(self) -> Iterator[tuple[Word, int]]:
        """(word, coefficient) pairs in shortlex order of the words."""
        for k in sorted(self.terms, key=shortlex_key):
            yield Word._trusted(k, self.rank), self.terms[k]

    def map_words(self, f) -> "RingElement":
        """Linear extension of a letter-tuple map ``f``."""
        d: dict[Letters, int] = defaultdict(int)
        for k, c in self.terms.items():
            d[f(k)] += c
        return RingElement(d, self.rank)

    def augmentation(self) -> int:
        return augmentation(self)

    def abelianize(self) -> "LaurentElement":
        return abelianize(self)

    def __str__(self) -> str:
        return format_ring(self)

    def __repr__(self) -> str:
        return f"RingElement({format_ring(self)!r}, rank={self.rank})"


def augmentation(a: RingElement) -> int:
    return sum(a.terms.values())


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    return a + b


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    return a * b


def _exps(t: Letters, n: int) -> tuple[int, ...]:
    v = [0] * n
    for x in t:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


def abelianize(a: RingElement) -> "LaurentElement":
    d: dict[tuple, int] = defaultdict(int)
    for k, c in a.terms.items():
        d[_exps(k, a.rank)] += c
    return LaurentElement(d, a.rank)


def ring_inverse_of_word_element(a: RingElement) -> RingElement | None:
    """Inverse of ``±w`` (the obvious units of ZF); None for anything else."""
    if len(a.terms) != 1:
        return None
    (k, c), = a.terms.items()
    if c not in (1, -1):
        return None
    return RingElement({inv_letters(k): c}, a.rank)


# ---------------------------------------------------------------------------
# Laurent polynomials

def _add_vec(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _sub_vec(u, v):
    return tuple(a - b for a, b in zip(u, v))


class LaurentElement:
    """A finite Z-linear combination of monomials x^e, e in Z^n."""

    __slots__ = ("rank", "terms")

    def __init__(self, terms: dict | None = None, rank: int = 2):
        check_rank(rank)
        self.rank = rank
        self.terms: dict[tuple[int, ...], int] = _clean(terms or {})
        for k in self.terms:
            if len(k) != rank:
                raise RankError(f"exponent vector {k} does not have length {rank}")

    @classmethod
    def monomial(cls, exps, coeff: int = 1, rank: int | None = None) -> "LaurentElement":
        exps = tuple(exps)
        return cls({exps: coeff}, rank if rank is not None else len(exps))

    @classmethod
    def constant(cls, c: int, rank: int) -> "LaurentElement":
        return cls({(0,) * rank: c}, rank)

    @classmethod
    def zero(cls, rank: int) -> "LaurentElement":
        return cls({}, rank)

    @classmethod
    def one(cls, rank: int) -> "LaurentElement":
        return cls.constant(1, rank)

    @classmethod
    def gen(cls, i: int, rank: int, power: int = 1) -> "LaurentElement":
        e = [0] * rank
        e[i - 1] = power
        return cls({tuple(e): 1}, rank)

    def _coerce(self, other) -> "LaurentElement":
        if isinstance(other, int):
            return LaurentElement.constant(other, self.rank)
        if not isinstance(other, LaurentElement):
            raise TypeError(f"cannot combine LaurentElement with {type(other).__name__}")
        if other.rank != self.rank:
            raise RankError(f"rank mismatch: {self.rank} vs {other.rank}")
        return other

    def __add__(self, other) -> "LaurentElement":
        other = self._coerce(other)
        d = dict(self.terms)
        for k, c in other.terms.items():
            d[k] = d.get(k, 0) + c
        return LaurentElement(d, self.rank)

    __radd__ = __add__

    def __neg__(self) -> "LaurentElement":
        return LaurentElement({k: -c for k, c in self.terms.items()}, self.rank)

    def __sub__(self, other) -> "LaurentElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentElement":
        if isinstance(other, int):
            return LaurentElement({k: c * other for k, c in self.terms.items()}, self.rank)
        other = self._coerce(other)
        d: dict[tuple, int] = defaultdict(int)
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                d[_add_vec(a, b)] += ca * cb
        return LaurentElement(d, self.rank)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentElement.constant(other, self.rank)
        if not isinstance(other, LaurentElement):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def items(self):
        for k in sorted(self.terms, reverse=True):
            yield k, self.terms[k]

    def __str__(self) -> str:
        return format_laurent(self)

    def __repr__(self) -> str:
        return f"LaurentElement({format_laurent(self)!r}, rank={self.rank})"


def laurent_is_unit(p: LaurentElement) -> tuple[int, tuple[int, ...]] | None:
    """``(sign, exponents)`` when p is ±(monomial); otherwise None."""
    if len(p.terms) != 1:
        return None
    (k, c), = p.terms.items()
    if c in (1, -1):
        return c, k
    return None


def _min_exps(p: LaurentElement) -> tuple[int, ...]:
    return tuple(min(k[i] for k in p.terms) for i in range(p.rank))


def _max_exps(p: LaurentElement) -> tuple[int, ...]:
    return tuple(max(k[i] for k in p.terms) for i in range(p.rank))


def laurent_divide_exact(p: LaurentElement, q: LaurentElement) -> LaurentElement | None:
    """Return w with ``p == w * q`` in the Laurent ring, or None if none exists.

    Both operands are shifted into ordinary polynomials (minimal exponent 0 in
    every variable) and divided by lex-leading terms. Z is a domain, so in each
    variable the exponent range of a product is the sum of the ranges; quotient
    terms outside that box mean ``q`` does not divide ``p``.
    """
    if p.rank != q.rank:
        raise RankError(f"rank mismatch: {p.rank} vs {q.rank}")
    if not q:
        raise ZeroDivisionError("division by the zero Laurent element")
    n = p.rank
    if not p:
        return LaurentElement.zero(n)
    pmin, qmin = _min_exps(p), _min_exps(q)
    pmax, qmax = _max_exps(p), _max_exps(q)
    hi = _sub_vec(pmax, qmax)
    shift = _sub_vec(pmin, qmin)
    if any(h < 0 for h in _sub_vec(hi, shift)):
        return None
    # shifted operands are polynomials; quotient exponents lie in [0, hi - shift]
    rem = {_sub_vec(k, pmin): c for k, c in p.terms.items()}
    qs = {_sub_vec(k, qmin): c for k, c in q.terms.items()}
    qlead = max(qs)
    qlc = qs[qlead]
    box = _sub_vec(hi, shift)
    quot: dict[tuple, int] = {}
    while rem:
        lead = max(rem)
        c = rem[lead]
        e = _sub_vec(lead, qlead)
        if c % qlc or any(x < 0 or x > b for x, b in zip(e, box)):
            return None
        t = c // qlc
        quot[e] = t
        for k, cq in qs.items():
            kk = _add_vec(k, e)
            v = rem.get(kk, 0) - t * cq
            if v:
                rem[kk] = v
            else:
                rem.pop(kk, None)
    return LaurentElement({_add_vec(k, shift): c for k, c in quot.items()}, n)


# ---------------------------------------------------------------------------
# matrices

class RingMatrix:
    """A rectangular array of RingElement or LaurentElement entries.

    Square in every use here; row vectors are allowed so the
    row identities can go through the same multiplication.
    """

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows) or not rows[0]:
            raise ValueError("matrix rows must be nonempty and of equal length")
        ranks = {e.rank for r in rows for e in r}
        if len(ranks) != 1:
            raise RankError(f"entries of mixed rank {sorted(ranks)}")
        self.rows = rows

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def rank(self) -> int:
        return self.rows[0][0].rank

    @property
    def kind(self):
        return type(self.rows[0][0])

    @classmethod
    def identity(cls, m: int, rank: int, kind=RingElement) -> "RingMatrix":
        return cls([[kind.one(rank) if i == j else kind.zero(rank) for j in range(m)]
                    for i in range(m)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __mul__(self, other: "RingMatrix") -> "RingMatrix":
        return matrix_mul(self, other)

    def map(self, f) -> "RingMatrix":
        return RingMatrix([[f(e) for e in r] for r in self.rows])

    def is_identity(self) -> bool:
        m, k = self.shape
        return m == k and all(
            self.rows[i][j] == (1 if i == j else 0) for i in range(m) for j in range(m)
        )

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows)

    def __repr__(self) -> str:
        return f"RingMatrix({[[str(e) for e in r] for r in self.rows]!r})"


def matrix_mul(a: RingMatrix, b: RingMatrix) -> RingMatrix:
    m, k = a.shape
    k2, p = b.shape
    if k != k2:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
    if a.rank != b.rank:
        raise RankError(f"rank mismatch: {a.rank} vs {b.rank}")
    zero = a.kind.zero(a.rank)
    rows = []
    for i in range(m):
        row = []
        for j in range(p):
            acc = zero
            for t in range(k):
                x, y = a.rows[i][t], b.rows[t][j]
                if x and y:
                    acc = acc + x * y
            row.append(acc)
        rows.append(row)
    return RingMatrix(rows)


def laurent_det(m: RingMatrix) -> LaurentElement:
    """Determinant over the commutative Laurent ring by Laplace expansion,
    memoised on the set of columns still available."""
    rows, cols = m.shape
    if rows != cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rank
    memo: dict[tuple[int, int], LaurentElement] = {}

    def minor(r: int, avail: int) -> LaurentElement:
        if r == rows:
            return LaurentElement.one(n)
        key = (r, avail)
        if key in memo:
            return memo[key]
        acc = LaurentElement.zero(n)
        sign = 1
        for j in range(cols):
            if not avail >> j & 1:
                continue
            e = m.rows[r][j]
            if e:
                sub = minor(r + 1, avail & ~(1 << j))
                if sub:
                    acc = acc + e * sub * sign
            sign = -sign
        memo[key] = acc
        return acc

    return minor(0, (1 << cols) - 1)


def int_det(a: list[list[int]]) -> int:
    """Exact integer determinant (Bareiss fraction-free elimination)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


# ---------------------------------------------------------------------------
# text and JSON forms



def parse_ring(text: str, rank: int) -> RingElement:
    """Parse e.g. ``"1 - a b A"`` or ``"2*x1*x2^-1 + 3"``."""
    check_rank(rank)
    s = text.strip()
    if not s or s == "0":
        return RingElement.zero(rank)
    pairs = []
    pos = 0
    # a "-" right after "^" is an exponent sign, not a term separator
    tokens = re.split(r"(?<!\^)\s*([+-])\s*", s)
    if tokens and tokens[0] == "":
        tokens = tokens[1:]
    else:
        tokens = ["+"] + tokens
    if len(tokens) % 2:
        raise ParseError("dangling sign", text, len(text))
    for sgn, body in zip(tokens[::2], tokens[1::2]):
        body = body.strip()
        if not body:
            raise ParseError("empty term", text, pos)
        m = re.match(r"^(\d+)\s*(\*?)\s*(.*)$", body)
        if m and (m.group(3) == "" or m.group(2) or not m.group(3)[0].isdigit()):
            coeff = int(m.group(1))
            wtext = m.group(3)
        else:
            coeff, wtext = 1, body
        try:
            letters = parse_letters(wtext, rank)
        except ParseError as e:
            raise ParseError(f"bad word in term {body!r}", text, text.find(body) + e.position) from None
        pairs.append((coeff if sgn == "+" else -coeff, letters))
        pos += len(body)
    return RingElement.from_pairs(pairs, rank)


def format_ring(a: RingElement) -> str:
    if not a.terms:
        return "0"
    parts = []
    for k in sorted(a.terms, key=shortlex_key):
        c = a.terms[k]
        mag = abs(c)
        if not k:
            body = str(mag)
        else:
            w = format_letters(k)
            body = w if mag == 1 else f"{mag}*{w}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def ring_to_json(a: RingElement) -> list:
    return [[c, format_letters(k)] for k, c in
            sorted(a.terms.items(), key=lambda kc: shortlex_key(kc[0]))]


def ring_from_json(obj: list, rank: int) -> RingElement:
    return RingElement.from_pairs([(c, parse_letters(w, rank)) for c, w in obj], rank)


def format_laurent(p: LaurentElement) -> str:
    if not p.terms:
        return "0"
    parts = []
    for k, c in p.items():
        mono = []
        for i, e in enumerate(k, start=1):
            if e == 1:
                mono.append(f"x{i}")
            elif e:
                mono.append(f"x{i}^{e}")
        mag = abs(c)
        if mono:
            body = "*".join(mono) if mag == 1 else f"{mag}*" + "*".join(mono)
        else:
            body = str(mag)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def laurent_to_json(p: LaurentElement) -> list:
    return [[c, list(k)] for k, c in p.items()]


def laurent_from_json(obj: list, rank: int) -> LaurentElement:
    d: dict[tuple, int] = defaultdict(int)
    for c, k in obj:
        d[tuple(k)] += c
    return LaurentElement(d, rank)


def matrix_to_json(m: RingMatrix):
    if m.kind is LaurentElement:
        return [[laurent_to_json(e) for e in r] for r in m.rows]
    return [[format_ring(e) for e in r] for r in m.rows]


def matrix_from_json(obj, rank: int) -> RingMatrix:
    """Matrix file form: JSON array of arrays of ring-element text forms."""
    return RingMatrix([[parse_ring(e, rank) for e in r] for r in obj])
