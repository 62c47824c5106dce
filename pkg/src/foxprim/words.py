"""Freely reduced words over x_1..x_n and their inverses.

Letters are stored as nonzero ints: ``+i`` is x_i and ``-i`` is x_i^{-1}.
Most algorithms in the package work on these raw letter tuples for speed;
:class:`Word` is the validated, rank-carrying wrapper used at API boundaries.

Two text forms are accepted:

* compact: ``a``..``z`` are x_1..x_26, uppercase is the inverse (``abAB``);
* verbose: ``x1*x2^-1`` (any rank, ``*`` or whitespace between factors).

``1`` or the empty string denotes the identity in both forms.
"""
from __future__ import annotations

import re
from itertools import product
from typing import Iterable, Iterator, NamedTuple, Sequence

Letters = tuple  # tuple[int, ...]


class RankError(ValueError):
    """Generator index out of range, or operands of different rank."""


class ParseError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class Letter(NamedTuple):
    generator: int
    sign: int


def check_rank(n: int) -> int:
    if not isinstance(n, int) or n < 2:
        raise RankError(f"rank must be an integer >= 2, got {n!r}")
    return n


# ---------------------------------------------------------------------------
# raw letter-tuple helpers

def reduce_letters(seq: Iterable[int]) -> Letters:
    out: list[int] = []
    for x in seq:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def mul_letters(u: Letters, v: Letters) -> Letters:
    k = 0
    m = min(len(u), len(v))
    while k < m and u[-1 - k] == -v[k]:
        k += 1
    return u[: len(u) - k] + v[k:]


def inv_letters(u: Letters) -> Letters:
    return tuple(-x for x in reversed(u))


def cyclic_core(u: Letters) -> tuple[Letters, Letters]:
    """Split a reduced tuple as ``c + core + c^-1``; returns ``(core, c)``."""
    i, j = 0, len(u) - 1
    while i < j and u[i] == -u[j]:
        i += 1
        j -= 1
    return u[i : j + 1], u[:i]


def letter_key(x: int) -> tuple[int, int]:
    return (abs(x), 0 if x > 0 else 1)


def shortlex_key(u: Letters) -> tuple:
    return (len(u), tuple(letter_key(x) for x in u))


def min_rotation(u: Letters) -> Letters:
    """Shortlex-least rotation of a cyclically reduced tuple."""
    if len(u) < 2:
        return u
    best = u
    bkey = shortlex_key(u)
    for r in range(1, len(u)):
        cand = u[r:] + u[:r]
        ck = shortlex_key(cand)
        if ck < bkey:
            best, bkey = cand, ck
    return best


def ordered_letters(n: int) -> list[int]:
    out = []
    for i in range(1, n + 1):
        out += [i, -i]
    return out


# ---------------------------------------------------------------------------
# the Word type

class Word:
    """An element of the free group F_n as a freely reduced letter tuple."""

    __slots__ = ("rank", "letters")

    def __init__(self, letters: Iterable[int] = (), rank: int = 2):
        check_rank(rank)
        letters = reduce_letters(letters)
        for x in letters:
            if not isinstance(x, int) or x == 0 or abs(x) > rank:
                raise RankError(f"letter {x!r} not valid in rank {rank}")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "letters", letters)

    @classmethod
    def _trusted(cls, letters: Letters, rank: int) -> "Word":
        w = object.__new__(cls)
        object.__setattr__(w, "rank", rank)
        object.__setattr__(w, "letters", letters)
        return w

    @classmethod
    def identity(cls, rank: int) -> "Word":
        return cls((), rank)

    @classmethod
    def generator(cls, i: int, rank: int) -> "Word":
        return cls((i,), rank)

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return Word._trusted(self.letters[k], self.rank)
        return self.letters[k]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.rank == other.rank and self.letters == other.letters

    def __hash__(self) -> int:
        return hash((self.rank, self.letters))

    def __lt__(self, other: "Word") -> bool:
        return shortlex_key(self.letters) < shortlex_key(other.letters)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return multiply(self, other)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else invert(self)
        out: Letters = ()
        for _ in range(abs(k)):
            out = mul_letters(out, base.letters)
        return Word._trusted(out, self.rank)

    def inverse(self) -> "Word":
        return invert(self)

    def is_identity(self) -> bool:
        return not self.letters

    def letter_pairs(self) -> list[Letter]:
        return [Letter(abs(x), 1 if x > 0 else -1) for x in self.letters]

    def generators_used(self) -> set[int]:
        return {abs(x) for x in self.letters}

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r}, rank={self.rank})"


def _same_rank(u: Word, v: Word) -> int:
    if u.rank != v.rank:
        raise RankError(f"rank mismatch: {u.rank} vs {v.rank}")
    return u.rank


def multiply(u: Word, v: Word) -> Word:
    return Word._trusted(mul_letters(u.letters, v.letters), _same_rank(u, v))


def invert(w: Word) -> Word:
    return Word._trusted(inv_letters(w.letters), w.rank)


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u v u^-1 v^-1``."""
    n = _same_rank(u, v)
    a, b = u.letters, v.letters
    out = mul_letters(mul_letters(mul_letters(a, b), inv_letters(a)), inv_letters(b))
    return Word._trusted(out, n)


def conjugate(w: Word, c: Word) -> Word:
    """``c w c^-1``."""
    n = _same_rank(w, c)
    return Word._trusted(
        mul_letters(mul_letters(c.letters, w.letters), inv_letters(c.letters)), n
    )


class CyclicReduction(NamedTuple):
    core: Word
    conjugator: Word

    def reassemble(self) -> Word:
        return conjugate(self.core, self.conjugator)


def cyclic_reduce(w: Word) -> CyclicReduction:
    core, c = cyclic_core(w.letters)
    return CyclicReduction(Word._trusted(core, w.rank), Word._trusted(c, w.rank))


def is_cyclically_reduced(w: Word) -> bool:
    u = w.letters
    return len(u) < 2 or u[0] != -u[-1]


def is_prefix_no_cancellation(g: Word, w: Word) -> bool:
    """True iff ``w = g h`` with ``|w| = |g| + |h|``.

    Both are reduced, so this is exactly a letterwise prefix test.
    """
    return w.letters[: len(g.letters)] == g.letters


def exponent_sum(w: Word, i: int) -> int:
    if not 1 <= i <= w.rank:
        raise RankError(f"generator index {i} out of range for rank {w.rank}")
    return sum(1 if x == i else -1 if x == -i else 0 for x in w.letters)


def abelianization(w: Word) -> tuple[int, ...]:
    v = [0] * w.rank
    for x in w.letters:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


def enumerate_reduced(rank: int, max_len: int) -> Iterator[Word]:
    """All freely reduced words of length <= max_len, in shortlex order."""
    check_rank(rank)
    alphabet = ordered_letters(rank)

    def extend(prefix: list[int], remaining: int):
        if remaining == 0:
            yield tuple(prefix)
            return
        for x in alphabet:
            if prefix and prefix[-1] == -x:
                continue
            prefix.append(x)
            yield from extend(prefix, remaining - 1)
            prefix.pop()

    for k in range(max_len + 1):
        for t in extend([], k):
            yield Word._trusted(t, rank)


def count_reduced(rank: int, k: int) -> int:
    return 1 if k == 0 else 2 * rank * (2 * rank - 1) ** (k - 1)


# ---------------------------------------------------------------------------
# text forms

_VERBOSE_FACTOR = re.compile(r"\s*(?:\*\s*)?x(\d+)(?:\s*\^\s*(-?\d+))?\s*")


def parse_letters(text: str, rank: int | None = None) -> Letters:
    """Parse either text form into an (unreduced) letter tuple."""
    s = text.strip()
    if s in ("", "1", "e"):
        return ()
    out: list[int] = []
    if any(ch.isdigit() for ch in s):
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _VERBOSE_FACTOR.match(text, pos)
            if m is None or m.end() == pos:
                raise ParseError("expected factor like x3 or x3^-2", text, pos)
            idx = int(m.group(1))
            if idx < 1:
                raise ParseError("generator index must be >= 1", text, m.start(1))
            if rank is not None and idx > rank:
                raise RankError(f"generator x{idx} out of range for rank {rank}")
            e = int(m.group(2)) if m.group(2) is not None else 1
            out += [idx if e > 0 else -idx] * abs(e)
            pos = m.end()
        return tuple(out)
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        if "a" <= ch <= "z":
            x = ord(ch) - ord("a") + 1
        elif "A" <= ch <= "Z":
            x = -(ord(ch) - ord("A") + 1)
        else:
            raise ParseError(f"unexpected character {ch!r}", text, pos)
        if rank is not None and abs(x) > rank:
            raise RankError(f"generator {ch!r} (x{abs(x)}) out of range for rank {rank}")
        out.append(x)
    return tuple(out)


def parse(text: str, rank: int) -> Word:
    return Word(parse_letters(text, rank), rank)


def infer_rank(*texts: str) -> int:
    """Smallest rank (at least 2) accommodating every generator mentioned."""
    n = 2
    for t in texts:
        for x in parse_letters(t):
            n = max(n, abs(x))
    return n


def format_letters(u: Letters, verbose: bool | None = None) -> str:
    if not u:
        return "1"
    if verbose is None:
        verbose = max(abs(x) for x in u) > 26
    if not verbose:
        return "".join(
            chr(ord("a") + x - 1) if x > 0 else chr(ord("A") - x - 1) for x in u
        )
    parts = []
    i = 0
    while i < len(u):
        j = i
        while j < len(u) and u[j] == u[i]:
            j += 1
        e = (j - i) * (1 if u[i] > 0 else -1)
        parts.append(f"x{abs(u[i])}" + ("" if e == 1 else f"^{e}"))
        i = j
    return "*".join(parts)


def format_word(w: Word, verbose: bool | None = None) -> str:
    if verbose is None:
        verbose = w.rank > 26
    return format_letters(w.letters, verbose)


def word_to_json(w: Word) -> dict:
    return {"rank": w.rank, "letters": [[abs(x), 1 if x > 0 else -1] for x in w.letters]}


def word_from_json(obj: dict) -> Word:
    n = obj["rank"]
    return Word([g * s for g, s in obj["letters"]], n)


# ---------------------------------------------------------------------------
# symmetry: signed permutations of the generators

def signed_permutations(n: int) -> list[dict[int, int]]:
    """Every signed permutation of 1..n as a letter map (identity first)."""
    from itertools import permutations

    out = []
    for perm in permutations(range(1, n + 1)):
        for signs in product((1, -1), repeat=n):
            m = {}
            for i, (p, s) in enumerate(zip(perm, signs), start=1):
                m[i] = s * p
                m[-i] = -s * p
            out.append(m)
    return out


def apply_letter_map(u: Sequence[int], m: dict[int, int]) -> Letters:
    return tuple(m[x] for x in u)
