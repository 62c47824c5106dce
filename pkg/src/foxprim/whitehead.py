"""Whitehead automorphisms, orbit minimization and orbit search.

Words are handled as cyclic words (conjugacy classes) during search. Search
nodes are canonical under rotation *and* signed permutations of the
generators: conjugating a type II Whitehead automorphism by a signed
permutation gives another type II automorphism, so the quotient graph is
still connected at the minimal level and every orbit element of bounded
length is reached by a length-increasing path from it.

Linear-word certificates are rebuilt at the end by replaying the recorded
moves and appending one conjugation.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence, Union

from .maps import Endomorphism
from .words import (
    Letters,
    RankError,
    Word,
    cyclic_core,
    format_letters,
    inv_letters,
    mul_letters,
    ordered_letters,
    shortlex_key,
    signed_permutations,
)

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    def __init__(self, nodes: int):
        super().__init__(f"search budget exhausted after {nodes} nodes")
        self.nodes = nodes


# ---------------------------------------------------------------------------
# moves

@dataclass(frozen=True)
class PermutationMove:
    """Type I: x_i -> images[i-1], a signed generator."""

    images: tuple[int, ...]

    def table(self) -> dict[int, Letters]:
        t = {}
        for i, y in enumerate(self.images, start=1):
            t[i] = (y,)
            t[-i] = (-y,)
        return t

    def inverse(self) -> "PermutationMove":
        inv = [0] * len(self.images)
        for i, y in enumerate(self.images, start=1):
            inv[abs(y) - 1] = i if y > 0 else -i
        return PermutationMove(tuple(inv))

    def describe(self) -> str:
        return "perm(" + ", ".join(f"x{i}->{format_letters((y,))}"
                                   for i, y in enumerate(self.images, start=1)) + ")"


@dataclass(frozen=True)
class WhiteheadMove:
    """Type II with multiplier letter ``a``.

    ``actions[i-1]`` for each generator x_i other than a: 0 fix, 1 x->x a,
    2 x->a^-1 x, 3 x->a^-1 x a. The multiplier itself is fixed.
    """

    multiplier: int
    actions: tuple[int, ...]

    def table(self) -> dict[int, Letters]:
        a = self.multiplier
        t = {}
        for i, act in enumerate(self.actions, start=1):
            if i == abs(a):
                img: Letters = (i,)
            else:
                img = ((-a,) if act & 2 else ()) + (i,) + ((a,) if act & 1 else ())
            t[i] = img
            t[-i] = inv_letters(img)
        return t

    def inverse(self) -> "WhiteheadMove":
        return WhiteheadMove(-self.multiplier, self.actions)

    def describe(self) -> str:
        a = format_letters((self.multiplier,))
        parts = []
        names = {1: "right", 2: "left", 3: "conj"}
        for i, act in enumerate(self.actions, start=1):
            if act and i != abs(self.multiplier):
                parts.append(f"x{i}:{names[act]}")
        return f"wh({a}; " + ", ".join(parts) + ")"


@dataclass(frozen=True)
class ConjugationMove:
    """Inner automorphism w -> c w c^-1."""

    conjugator: Letters

    def apply_letters(self, u: Letters) -> Letters:
        c = self.conjugator
        return mul_letters(mul_letters(c, u), inv_letters(c))

    def inverse(self) -> "ConjugationMove":
        return ConjugationMove(inv_letters(self.conjugator))

    def describe(self) -> str:
        return f"conj({format_letters(self.conjugator)})"


Move = Union[PermutationMove, WhiteheadMove, ConjugationMove]


def _apply_table(table: dict[int, Letters], u: Letters) -> Letters:
    out: list[int] = []
    for x in u:
        for y in table[x]:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def apply_move(move: Move, u: Letters) -> Letters:
    if isinstance(move, ConjugationMove):
        return move.apply_letters(u)
    return _apply_table(move.table(), u)


def move_endomorphism(move: Move, n: int) -> Endomorphism:
    return Endomorphism.from_letters([apply_move(move, (i,)) for i in range(1, n + 1)])


@lru_cache(maxsize=None)
def type2_moves(n: int) -> tuple[tuple[WhiteheadMove, dict], ...]:
    """All nontrivial type II moves of rank n with their letter tables."""
    out = []
    for a in ordered_letters(n):
        for acts in product(range(4), repeat=n - 1):
            if not any(acts):
                continue
            full = list(acts)
            full.insert(abs(a) - 1, 0)
            m = WhiteheadMove(a, tuple(full))
            out.append((m, m.table()))
    return tuple(out)


# ---------------------------------------------------------------------------
# cyclic words and canonical forms

def _code(x: int) -> int:
    return 2 * x - 1 if x > 0 else -2 * x


def canonical_rotation(u: Letters) -> tuple[Letters, int]:
    """Shortlex-least rotation of a cyclic word and its offset r (result = u[r:] + u[:r])."""
    if len(u) < 2:
        return u, 0
    c = tuple(_code(x) for x in u)
    best = min((c[r:] + c[:r], r) for r in range(len(u)))
    r = best[1]
    return u[r:] + u[:r], r


def canonical_class(u: Letters, n: int) -> tuple[Letters, PermutationMove, int]:
    """Least form of a cyclic word under rotations and signed permutations.

    For a fixed rotation the least relabelling is greedy: each generator gets
    the next unused index, signed so its first occurrence is positive.
    Returns ``(canon, sigma, r)`` with ``canon == sigma(u[r:] + u[:r])``.
    """
    L = len(u)
    if L == 0:
        return (), PermutationMove(tuple(range(1, n + 1))), 0
    best = None
    for r in range(L):
        rot = u[r:] + u[:r]
        m: dict[int, int] = {}
        nxt = 1
        codes = []
        for x in rot:
            g = abs(x)
            if g not in m:
                m[g] = nxt if x > 0 else -nxt
                nxt += 1
            y = m[g] if x > 0 else -m[g]
            codes.append(_code(y))
        key = tuple(codes)
        if best is None or key < best[0]:
            best = (key, r, dict(m))
    key, r, m = best
    used = set(abs(v) for v in m.values())
    free = iter(k for k in range(1, n + 1) if k not in used)
    images = tuple(m[i] if i in m else next(free) for i in range(1, n + 1))
    sigma = PermutationMove(images)
    rot = u[r:] + u[:r]
    return _apply_table(sigma.table(), rot), sigma, r


def conjugator_between(r: Letters, t: Letters) -> Letters:
    """A word c with c r c^-1 = t, for conjugate reduced words r and t."""
    r0, a = cyclic_core(r)
    t0, b = cyclic_core(t)
    if len(r0) != len(t0):
        raise ValueError("words are not conjugate")
    L = len(r0)
    for k in range(max(L, 1)):
        if r0[k:] + r0[:k] == t0:
            s = r0[:k]
            return mul_letters(mul_letters(b, inv_letters(s)), inv_letters(a))
    raise ValueError("words are not conjugate")


# ---------------------------------------------------------------------------
# certificates

@dataclass
class OrbitCertificate:
    """Replaying ``moves`` on ``source`` yields exactly ``target``."""

    source: Word
    target: Word
    moves: list = field(default_factory=list)

    def replay(self) -> Word:
        u = self.source.letters
        for m in self.moves:
            u = apply_move(m, u)
        return Word._trusted(u, self.source.rank)

    def verify(self) -> bool:
        return self.replay() == self.target

    def automorphism(self) -> Endomorphism:
        """The composite automorphism carrying source to target."""
        n = self.source.rank
        imgs = [(i,) for i in range(1, n + 1)]
        for m in self.moves:
            imgs = [apply_move(m, t) for t in imgs]
        return Endomorphism.from_letters(imgs)

    def to_json(self) -> dict:
        return {
            "source": str(self.source),
            "target": str(self.target),
            "moves": [m.describe() for m in self.moves],
        }


@dataclass
class OrbitDisproof:
    """u and v lie in different Aut(F_n) orbits."""

    reason: str
    u_min: Word
    v_min: Word

    def to_json(self) -> dict:
        return {"disproof": self.reason, "u_min": str(self.u_min), "v_min": str(self.v_min)}


@dataclass
class BudgetExhausted:
    nodes: int

    def to_json(self) -> dict:
        return {"budget_exhausted": True, "nodes": self.nodes}


def _finish(source: Word, chain: list, target: Letters) -> OrbitCertificate:
    n = source.rank
    u = source.letters
    for m in chain:
        u = apply_move(m, u)
    c = conjugator_between(u, target)
    moves = list(chain)
    if c:
        moves.append(ConjugationMove(c))
    cert = OrbitCertificate(source, Word._trusted(target, n), moves)
    assert cert.verify()
    return cert


# ---------------------------------------------------------------------------
# minimization

def _best_reduction(u: Letters, n: int) -> tuple[WhiteheadMove | None, Letters]:
    best_len = len(u)
    best = (None, u)
    for m, table in type2_moves(n):
        v = cyclic_core(_apply_table(table, u))[0]
        if len(v) < best_len:
            best_len = len(v)
            best = (m, v)
    return best


def minimize_cyclic(u: Letters, n: int) -> tuple[Letters, list[WhiteheadMove]]:
    """Greedy Whitehead minimization of a cyclic word; returns (core, moves)."""
    cur = cyclic_core(u)[0]
    chain = []
    while True:
        m, v = _best_reduction(cur, n)
        if m is None:
            return cur, chain
        chain.append(m)
        cur = v


def minimal_length(w: Word) -> int:
    return len(minimize_cyclic(w.letters, w.rank)[0])


def whitehead_minimize(w: Word) -> tuple[Word, OrbitCertificate]:
    """Minimal-length representative of the orbit of w (as a cyclically
    reduced word in least rotation) and a certificate carrying w onto it."""
    core, chain = minimize_cyclic(w.letters, w.rank)
    target, _ = canonical_rotation(core)
    cert = _finish(w, chain, target)
    return cert.target, cert


# ---------------------------------------------------------------------------
# search at the minimal level

@dataclass
class LevelSearch:
    """Breadth-first exploration of one length level of an orbit, over classes
    canonical under rotation and signed permutation."""

    rank: int
    start: Letters
    budget: int = DEFAULT_BUDGET
    max_len: int | None = None  # explore lengths in [level, max_len] when set

    def __post_init__(self):
        canon, sigma, _ = canonical_class(self.start, self.rank)
        self.level = len(self.start)
        self.parent: dict[Letters, tuple | None] = {canon: None}
        self.entry_sigma = sigma
        self.root = canon
        self._queue = deque([canon])
        self.nodes = 0

    def _in_range(self, length: int) -> bool:
        if self.max_len is None:
            return length == self.level
        return length <= self.max_len

    def run(self, target: Letters | None = None) -> bool:
        """Expand until ``target`` (a canonical class) is seen or the
        component is exhausted. Raises BudgetExceeded."""
        if target is not None and target in self.parent:
            return True
        n = self.rank
        while self._queue:
            node = self._queue.popleft()
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded(self.nodes)
            for m, table in type2_moves(n):
                v = cyclic_core(_apply_table(table, node))[0]
                if not self._in_range(len(v)):
                    continue
                canon, sigma, _ = canonical_class(v, n)
                if canon in self.parent:
                    continue
                self.parent[canon] = (node, m, sigma)
                self._queue.append(canon)
                if target is not None and canon == target:
                    return True
        return target is None

    def path_to(self, canon: Letters) -> list[Move]:
        moves: list[Move] = []
        while True:
            p = self.parent[canon]
            if p is None:
                break
            node, m, sigma = p
            moves[:0] = [m, sigma]
            canon = node
        return moves

    def classes(self) -> list[Letters]:
        return list(self.parent)


def same_orbit(u: Word, v: Word, budget: int = DEFAULT_BUDGET):
    """OrbitCertificate carrying u to v, an OrbitDisproof, or BudgetExhausted."""
    if u.rank != v.rank:
        raise RankError(f"rank mismatch: {u.rank} vs {v.rank}")
    n = u.rank
    umin, uchain = minimize_cyclic(u.letters, n)
    vmin, vchain = minimize_cyclic(v.letters, n)
    if len(umin) != len(vmin):
        return OrbitDisproof(
            f"minimal lengths differ ({len(umin)} vs {len(vmin)})",
            Word._trusted(umin, n), Word._trusted(vmin, n))
    search = LevelSearch(n, umin, budget)
    vcanon, vsigma, _ = canonical_class(vmin, n)
    try:
        found = search.run(vcanon)
    except BudgetExceeded as e:
        return BudgetExhausted(e.nodes)
    if not found:
        return OrbitDisproof(
            f"minimal-level component exhausted ({len(search.parent)} classes) without reaching v",
            Word._trusted(umin, n), Word._trusted(vmin, n))
    chain: list[Move] = list(uchain) + [search.entry_sigma] + search.path_to(vcanon)
    chain.append(vsigma.inverse())
    chain += [m.inverse() for m in reversed(vchain)]
    return _finish(u, chain, v.letters)


@dataclass
class SupportBound:
    value: int
    exact: bool
    nodes: int


def min_generator_support(w: Word, budget: int = DEFAULT_BUDGET) -> SupportBound:
    """Fewest distinct generators among the minimal-level orbit elements.

    An upper bound on the outer rank; ``exact`` is set when the minimal-level
    component was exhausted within the budget.
    """
    n = w.rank
    core, _ = minimize_cyclic(w.letters, n)
    search = LevelSearch(n, core, budget)
    exact = True
    try:
        search.run()
    except BudgetExceeded:
        exact = False
    best = min(len({abs(x) for x in c}) for c in search.classes())
    return SupportBound(best, exact, search.nodes)


def minimal_level_classes(w: Word, budget: int = DEFAULT_BUDGET) -> set[Letters]:
    n = w.rank
    core, _ = minimize_cyclic(w.letters, n)
    search = LevelSearch(n, core, budget)
    search.run()
    return set(search.classes())


def in_orbit_of(level_classes: set[Letters], w: Word) -> bool:
    core, _ = minimize_cyclic(w.letters, w.rank)
    some = next(iter(level_classes))
    if len(core) != len(some):
        return False
    return canonical_class(core, w.rank)[0] in level_classes


# ---------------------------------------------------------------------------
# bounded orbit enumeration

def orbit_classes(w: Word, max_len: int, budget: int = DEFAULT_BUDGET) -> list[Letters]:
    """Canonical classes of all cyclic words in the orbit of w of length <= max_len."""
    n = w.rank
    core, _ = minimize_cyclic(w.letters, n)
    if len(core) > max_len:
        return []
    search = LevelSearch(n, core, budget, max_len=max_len)
    search.run()
    return search.classes()


def expand_class(canon: Letters, n: int) -> set[Letters]:
    """Every cyclically reduced word in the class: all signed relabellings
    and rotations."""
    out = set()
    for m in _perm_tables(n):
        v = tuple(m[x] for x in canon)
        for r in range(max(len(v), 1)):
            out.add(v[r:] + v[:r])
    return out


@lru_cache(maxsize=None)
def _perm_tables(n: int):
    return tuple(signed_permutations(n))


def enumerate_orbit(w: Word, max_len: int, budget: int = DEFAULT_BUDGET) -> list[Word]:
    """Cyclically reduced elements of the orbit of w up to max_len, shortlex order."""
    n = w.rank
    words: set[Letters] = set()
    for c in orbit_classes(w, max_len, budget):
        words |= expand_class(c, n)
    return [Word._trusted(u, n) for u in sorted(words, key=shortlex_key)]


def orbit_violation_witness(phi: Endomorphism, u: Word, max_len: int,
                            budget: int = DEFAULT_BUDGET) -> Word | None:
    """First v in the orbit of u (shortlex, |v| <= max_len) with phi(v) outside
    that orbit. None means no witness up to max_len, nothing more."""
    if phi.rank != 2 or u.rank != 2:
        raise RankError("the orbit-preservation harness is for rank 2")
    level = minimal_level_classes(u, budget)
    for v in enumerate_orbit(u, max_len, budget):
        if not in_orbit_of(level, phi(v)):
            return v
    return None


def iter_moves(n: int) -> Iterator[Move]:
    for m, _ in type2_moves(n):
        yield m
    for images in _perm_images(n):
        yield PermutationMove(images)


def _perm_images(n: int):
    for m in _perm_tables(n):
        yield tuple(m[i] for i in range(1, n + 1))
