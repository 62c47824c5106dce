"""Endomorphisms of F_n; automorphism and monomorphism recognition.

Automorphisms are recognised by Nielsen reduction of the image tuple,
monomorphisms by Stallings folding of the image tuple. The two are
independent procedures and the test suite plays them against each other.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .groupring import RingElement, int_det, laurent_det, laurent_is_unit
from .words import (
    Letters,
    ParseError,
    RankError,
    Word,
    abelianization,
    check_rank,
    format_word,
    inv_letters,
    mul_letters,
    parse_letters,
    reduce_letters,
    shortlex_key,
)


@dataclass(frozen=True)
class Endomorphism:
    """x_i -> images[i-1]. Callable on words; ``apply_ring`` extends linearly."""

    images: tuple[Word, ...]

    def __post_init__(self):
        n = len(self.images)
        check_rank(n)
        for w in self.images:
            if w.rank != n:
                raise RankError(f"image {w} has rank {w.rank}, map has rank {n}")
        table = {}
        for i, w in enumerate(self.images, start=1):
            table[i] = w.letters
            table[-i] = inv_letters(w.letters)
        object.__setattr__(self, "_table", table)

    @property
    def rank(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Endomorphism":
        return cls(tuple(Word.generator(i, n) for i in range(1, n + 1)))

    @classmethod
    def from_letters(cls, images: Sequence[Sequence[int]]) -> "Endomorphism":
        n = len(images)
        return cls(tuple(Word(t, n) for t in images))

    def apply_letters(self, u: Letters) -> Letters:
        out: list[int] = []
        table = self._table
        for x in u:
            for y in table[x]:
                if out and out[-1] == -y:
                    out.pop()
                else:
                    out.append(y)
        return tuple(out)

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def apply_ring(self, a: RingElement) -> RingElement:
        if a.rank != self.rank:
            raise RankError(f"rank mismatch: {a.rank} vs {self.rank}")
        return a.map_words(self.apply_letters)

    def __str__(self) -> str:
        return format_map(self)


def apply(phi: Endomorphism, w):
    if isinstance(w, RingElement):
        return phi.apply_ring(w)
    if w.rank != phi.rank:
        raise RankError(f"rank mismatch: word rank {w.rank}, map rank {phi.rank}")
    return Word._trusted(phi.apply_letters(w.letters), phi.rank)


def compose(phi: Endomorphism, psi: Endomorphism) -> Endomorphism:
    """(phi o psi)(x_i) = phi(psi(x_i))."""
    if phi.rank != psi.rank:
        raise RankError(f"rank mismatch: {phi.rank} vs {psi.rank}")
    return Endomorphism(tuple(phi(y) for y in psi.images))


def parse_map(text: str, rank: int | None = None) -> Endomorphism:
    """Parse ``"x1->a b; x2->B"``; generators not mentioned are fixed."""
    clauses = [c for c in text.split(";") if c.strip()]
    parsed = {}
    for c in clauses:
        m = re.match(r"^\s*x(\d+)\s*->\s*(.*?)\s*$", c)
        if m is None:
            raise ParseError("expected clause like 'x1->ab'", text, text.find(c))
        i = int(m.group(1))
        if i < 1 or i in parsed:
            raise ParseError(f"bad or repeated generator x{i}", text, text.find(c))
        parsed[i] = parse_letters(m.group(2))
    if not parsed:
        raise ParseError("empty map", text, 0)
    need = max(max(parsed), max((abs(x) for t in parsed.values() for x in t), default=1), 2)
    if rank is None:
        rank = need
    elif need > rank:
        raise RankError(f"map mentions x{need} but rank is {rank}")
    images = tuple(Word(parsed.get(i, (i,)), rank) for i in range(1, rank + 1))
    return Endomorphism(images)


def format_map(phi: Endomorphism) -> str:
    return "; ".join(f"x{i}->{format_word(w)}" for i, w in enumerate(phi.images, start=1))


def abelianization_matrix(phi: Endomorphism) -> list[list[int]]:
    """Row i is the exponent-sum vector of phi(x_i)."""
    return [list(abelianization(w)) for w in phi.images]


# ---------------------------------------------------------------------------
# Nielsen reduction

def _half_key(u: Letters) -> tuple:
    h = (len(u) + 1) // 2
    a = shortlex_key(u[:h])
    b = shortlex_key(inv_letters(u)[:h])
    return (len(u), min(a, b), max(a, b), min(shortlex_key(u), shortlex_key(inv_letters(u))))


def nielsen_reduce(tuple_: Sequence[Word]) -> tuple[tuple[Word, ...], list[tuple]]:
    """Apply elementary Nielsen transformations until none improves the tuple.

    A move replaces u_i by u_i u_j^e or u_j^e u_i (i != j, e = ±1) when that
    lowers the element's order key: length first, then the left halves of the
    word and its inverse, then shortlex. Length-only reduction can stall on
    tuples violating the cancellation condition N2; the half-word tie-break
    resolves those, and the key is a well order on words so the loop ends.

    Returns the reduced tuple (each entry replaced by the shortlex-smaller of
    itself and its inverse; positions unchanged) and a replayable log of
    ``("right"|"left", i, j, e)`` and ``("invert", i)`` entries.
    """
    if not tuple_:
        raise ValueError("empty tuple")
    n = tuple_[0].rank
    us = [w.letters for w in tuple_]
    keys = [_half_key(u) for u in us]
    log: list[tuple] = []
    m = len(us)
    improved = True
    while improved:
        improved = False
        for i in range(m):
            for j in range(m):
                if i == j or not us[j]:
                    continue
                for e in (1, -1):
                    v = us[j] if e == 1 else inv_letters(us[j])
                    for side in ("right", "left"):
                        cand = mul_letters(us[i], v) if side == "right" else mul_letters(v, us[i])
                        k = _half_key(cand)
                        if k < keys[i]:
                            us[i], keys[i] = cand, k
                            log.append((side, i, j, e))
                            improved = True
    for i, u in enumerate(us):
        inv = inv_letters(u)
        if shortlex_key(inv) < shortlex_key(u):
            us[i] = inv
            log.append(("invert", i))
    return tuple(Word._trusted(u, n) for u in us), log


def replay_nielsen(tuple_: Sequence[Word], log: list[tuple]) -> tuple[Word, ...]:
    us = [w.letters for w in tuple_]
    for entry in log:
        if entry[0] == "invert":
            us[entry[1]] = inv_letters(us[entry[1]])
            continue
        side, i, j, e = entry
        v = us[j] if e == 1 else inv_letters(us[j])
        us[i] = mul_letters(us[i], v) if side == "right" else mul_letters(v, us[i])
    n = tuple_[0].rank
    return tuple(Word._trusted(u, n) for u in us)


def is_signed_permutation_tuple(ws: Sequence[Word]) -> bool:
    gens = [w.letters[0] for w in ws if len(w) == 1]
    return len(gens) == len(ws) == ws[0].rank and len({abs(x) for x in gens}) == len(ws)


def is_automorphism(phi: Endomorphism) -> bool:
    if abs(int_det(abelianization_matrix(phi))) != 1:
        return False
    reduced, _ = nielsen_reduce(phi.images)
    return is_signed_permutation_tuple(reduced)


def inverse_automorphism(phi: Endomorphism) -> Endomorphism:
    """phi^-1, read off the Nielsen log; ValueError if phi is not an automorphism.

    Replaying the log on (x_1, ..., x_n) gives words w_i with
    phi(w_i) = x_{s(i)}^{e_i}, so phi^-1(x_{s(i)}) = w_i^{e_i}.
    """
    reduced, log = nielsen_reduce(phi.images)
    if not is_signed_permutation_tuple(reduced):
        raise ValueError("not an automorphism")
    n = phi.rank
    ws = replay_nielsen([Word.generator(i, n) for i in range(1, n + 1)], log)
    images: list[Word | None] = [None] * n
    for y, w in zip(reduced, ws):
        g = y.letters[0]
        images[abs(g) - 1] = w if g > 0 else w.inverse()
    return Endomorphism(tuple(images))


def abelian_jacobian_unit(phi: Endomorphism):
    """(sign, monomial) of det of the abelianized Jacobian, or None if not a unit."""
    from .fox import abelian_jacobian

    return laurent_is_unit(laurent_det(abelian_jacobian(phi)))


# ---------------------------------------------------------------------------
# Stallings folding

class FoldedGraph:
    """Folded labelled graph of a finitely generated subgroup, based at vertex 0.

    Edges are stored on union-find roots only: ``out[v][a] = w`` and
    ``inn[w][a] = v`` for a positive label a. Stored endpoints may be stale
    and are resolved through ``find``.
    """

    def __init__(self, generators: Sequence[Sequence[int]]):
        self.parent: list[int] = [0]
        self.out: list[dict[int, int]] = [{}]
        self.inn: list[dict[int, int]] = [{}]
        self._pending: list[tuple[int, int]] = []
        for g in generators:
            g = reduce_letters(g)
            if not g:
                continue
            cur = 0
            for k, x in enumerate(g):
                nxt = 0 if k == len(g) - 1 else self._new_vertex()
                if x > 0:
                    self._attach(cur, x, nxt)
                else:
                    self._attach(nxt, -x, cur)
                self._fold()
                cur = nxt

    def _new_vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.out.append({})
        self.inn.append({})
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        p = self.parent
        while p[v] != v:
            p[v] = p[p[v]]
            v = p[v]
        return v

    def _attach(self, u: int, a: int, v: int):
        u, v = self.find(u), self.find(v)
        w = self.out[u].get(a)
        if w is not None:
            self._pending.append((w, v))
            return
        w = self.inn[v].get(a)
        if w is not None:
            self._pending.append((w, u))
            return
        self.out[u][a] = v
        self.inn[v][a] = u

    def _fold(self):
        while self._pending:
            x, y = self._pending.pop()
            x, y = self.find(x), self.find(y)
            if x == y:
                continue
            if y == 0:
                x, y = y, x
            out_y, inn_y = self.out[y], self.inn[y]
            self.out[y], self.inn[y] = {}, {}
            for a, w in out_y.items():
                w = self.find(w)
                if w != y:
                    self.inn[w].pop(a, None)
            for a, w in inn_y.items():
                w = self.find(w)
                if w != y:
                    self.out[w].pop(a, None)
            self.parent[y] = x
            for a, w in out_y.items():
                self._attach(x, a, w)
            for a, w in inn_y.items():
                self._attach(w, a, x)

    def vertices(self) -> list[int]:
        return [v for v in range(len(self.parent)) if self.find(v) == v]

    def edge_count(self) -> int:
        return sum(len(self.out[v]) for v in self.vertices())

    def rank(self) -> int:
        return self.edge_count() - len(self.vertices()) + 1

    def accepts(self, u: Sequence[int]) -> bool:
        """Whether the reduced word u labels a closed path at the base vertex."""
        v = 0
        for x in reduce_letters(u):
            nxt = self.out[v].get(x) if x > 0 else self.inn[v].get(-x)
            if nxt is None:
                return False
            v = self.find(nxt)
        return v == self.find(0)


def subgroup_rank(generators: Sequence[Word]) -> int:
    return FoldedGraph([w.letters for w in generators]).rank()


def subgroup_contains(generators: Sequence[Word], w: Word) -> bool:
    return FoldedGraph([g.letters for g in generators]).accepts(w.letters)


def is_monomorphism(phi: Endomorphism) -> bool:
    return subgroup_rank(phi.images) == phi.rank


def generates_whole_group(generators: Sequence[Word], n: int) -> bool:
    """Folded graph is the rose on n petals."""
    g = FoldedGraph([w.letters for w in generators])
    return len(g.vertices()) == 1 and g.edge_count() == n
