"""Primitive elements and primitivity-blocking words.

A word g is primitivity-blocking when no cyclically reduced primitive element
has the form g h without cancellation. In F_2 two families are known to block
(commutator prefixes and x1^k x2^l with k, l >= 2); for rank >= 3 whether any
blocking word exists is open, so beyond those families this module only
reports bounded-search evidence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Union

from .whitehead import enumerate_orbit, minimize_cyclic
from .words import (
    Letters,
    RankError,
    Word,
    abelianization,
    cyclic_core,
    enumerate_reduced,
    is_cyclically_reduced,
    is_prefix_no_cancellation,
    ordered_letters,
    shortlex_key,
    signed_permutations,
)


def is_primitive(w: Word) -> bool:
    if math.gcd(*abelianization(w)) != 1:
        return False
    return len(minimize_cyclic(w.letters, w.rank)[0]) == 1


def _is_primitive_letters(u: Letters, n: int) -> bool:
    e = [0] * n
    for x in u:
        e[abs(x) - 1] += 1 if x > 0 else -1
    if math.gcd(*e) != 1:
        return False
    return len(minimize_cyclic(u, n)[0]) == 1


def syllables_cyclic(u: Letters) -> list[tuple[int, int]]:
    """(generator, exponent) syllables of a cyclically reduced word read
    cyclically, so a syllable wrapping the end is counted once."""
    if not u:
        return []
    L = len(u)
    start = 0
    while start < L and abs(u[start]) == abs(u[start - 1]):
        start += 1
    if start == L:  # a single generator throughout
        return [(abs(u[0]), sum(1 if x > 0 else -1 for x in u))]
    rot = u[start:] + u[:start]
    out = []
    for x in rot:
        s = 1 if x > 0 else -1
        if out and out[-1][0] == abs(x):
            out[-1] = (abs(x), out[-1][1] + s)
        else:
            out.append((abs(x), s))
    return out


def cmz_necessary_condition(w: Word) -> bool:
    """Some generator occurs, cyclically, only in syllables x^1 or only in
    syllables x^-1. Necessary for primitivity in F_2."""
    if w.rank != 2:
        raise RankError("the syllable criterion is stated for rank 2")
    core, _ = cyclic_core(w.letters)
    exps: dict[int, set[int]] = {1: set(), 2: set()}
    for g, e in syllables_cyclic(core):
        exps[g].add(e)
    return any(s == {1} or s == {-1} for s in exps.values())


def enumerate_primitives_f2(max_len: int, method: str = "orbit") -> Iterator[Word]:
    """Cyclically reduced primitive words of F_2 of length <= max_len, shortlex.

    ``method="orbit"`` grows the orbit of x1 by Whitehead moves (complete by
    peak reduction); ``method="filter"`` tests every reduced word and is only
    practical for small bounds.
    """
    if method == "orbit":
        yield from enumerate_orbit(Word((1,), 2), max_len)
    elif method == "filter":
        for w in enumerate_reduced(2, max_len):
            if w.letters and is_cyclically_reduced(w) and is_primitive(w):
                yield w
    else:
        raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# blocking verdicts

@dataclass(frozen=True)
class Extendable:
    witness: Word
    nodes_explored: int = 0
    prefix: Word | None = None

    def __post_init__(self):
        w = self.witness
        if not (is_cyclically_reduced(w) and is_primitive(w)):
            raise ValueError(f"witness {w} is not a cyclically reduced primitive")
        if self.prefix is not None and not is_prefix_no_cancellation(self.prefix, w):
            raise ValueError(f"{self.prefix} is not a no-cancellation prefix of {w}")


@dataclass(frozen=True)
class BlockedUpTo:
    bound: int
    nodes_explored: int = 0


@dataclass(frozen=True)
class BlockedProven:
    rule: str
    prefix: Word


BlockingVerdict = Union[Extendable, BlockedUpTo, BlockedProven]


@lru_cache(maxsize=None)
def _f2_maps():
    return tuple(signed_permutations(2))


def certified_blocking_prefix(g: Word) -> BlockedProven | None:
    """Match g against the two F_2 blocking families, up to signed
    permutation of the generators (which preserves cyclic reducedness,
    primitivity and no-cancellation prefixes)."""
    if g.rank != 2:
        return None
    u = g.letters
    for m in _f2_maps():
        v = tuple(m[x] for x in u)
        if v[:4] == (1, 2, -1, -2):
            return BlockedProven("commutator", Word._trusted(u[:4], 2))
        k = 0
        while k < len(v) and v[k] == 1:
            k += 1
        l = 0
        while k + l < len(v) and v[k + l] == 2:
            l += 1
        if k >= 2 and l >= 2:
            return BlockedProven(f"x1^{k} x2^{l}", Word._trusted(u[: k + l], 2))
    return None


def _extensions(g: Letters, n: int, max_len: int) -> Iterator[Letters]:
    """Reduced words g h with no cancellation, shortest first, shortlex
    within a length, pruned to cyclically reduced results."""
    alphabet = ordered_letters(n)
    frontier = [g]
    for length in range(len(g), max_len + 1):
        nxt = []
        for w in frontier:
            if w and (len(w) < 2 or w[0] != -w[-1]):
                yield w
            if length < max_len:
                for x in alphabet:
                    if w and w[-1] == -x:
                        continue
                    nxt.append(w + (x,))
        frontier = nxt


def blocking_verdict(g: Word, max_len: int, certified: bool = True) -> BlockingVerdict:
    if certified:
        proven = certified_blocking_prefix(g)
        if proven is not None:
            return proven
    n = g.rank
    nodes = 0
    for w in _extensions(g.letters, n, max_len):
        nodes += 1
        if _is_primitive_letters(w, n):
            return Extendable(Word._trusted(w, n), nodes, g)
    return BlockedUpTo(max_len, nodes)


# ---------------------------------------------------------------------------
# bounded search for blocking words in rank >= 3

def canonical_candidate(u: Letters, n: int) -> Letters:
    """Least image of a word under signed permutations (no rotation: the
    prefix relation is not rotation invariant)."""
    m: dict[int, int] = {}
    nxt = 1
    out = []
    for x in u:
        g = abs(x)
        if g not in m:
            m[g] = nxt if x > 0 else -nxt
            nxt += 1
        out.append(m[g] if x > 0 else -m[g])
    return tuple(out)


def default_candidates(n: int, cand_len: int) -> list[Word]:
    """Cyclically reduced words of length 1..cand_len, one per orbit of the
    signed permutation group, in shortlex order."""
    seen = set()
    out = []
    for w in enumerate_reduced(n, cand_len):
        if not w.letters or not is_cyclically_reduced(w):
            continue
        c = canonical_candidate(w.letters, n)
        if c not in seen:
            seen.add(c)
            out.append(Word._trusted(c, n))
    return sorted(out, key=lambda w: shortlex_key(w.letters))


def verdict_record(g: Word, verdict: BlockingVerdict, max_len: int) -> dict:
    rec = {"candidate": str(g), "verdict": type(verdict).__name__, "bound": max_len}
    if isinstance(verdict, Extendable):
        rec["witness"] = str(verdict.witness)
    if isinstance(verdict, BlockedProven):
        rec["rule"] = verdict.rule
        rec["nodes_explored"] = 0
    else:
        rec["nodes_explored"] = verdict.nodes_explored
    return rec


def _verdict_job(args) -> dict:
    letters, n, max_len = args
    g = Word._trusted(letters, n)
    return verdict_record(g, blocking_verdict(g, max_len), max_len)


def blocking_search(n: int, max_len: int, candidates: Iterable[Word] | None = None,
                    cand_len: int = 2, sink=None, workers: int = 1,
                    done: dict | None = None) -> dict:
    """Run blocking_verdict over candidates; survivors are candidates with no
    primitive extension up to max_len. Never claims a proof of blocking.

    ``sink(record)`` is called after each finished candidate (used for
    checkpointing); ``done`` maps candidate text to an already-finished record.
    Results are keyed by candidate so the merge is order independent.
    """
    if n < 3:
        raise RankError("blocking search is for rank >= 3")
    cands = list(candidates) if candidates is not None else default_candidates(n, cand_len)
    results: dict[str, dict] = dict(done or {})
    todo = [g for g in cands if str(g) not in results]
    jobs = [(g.letters, n, max_len) for g in todo]
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            for rec in pool.map(_verdict_job, jobs, chunksize=4):
                results[rec["candidate"]] = rec
                if sink:
                    sink(rec)
    else:
        for job in jobs:
            rec = _verdict_job(job)
            results[rec["candidate"]] = rec
            if sink:
                sink(rec)
    order = {str(g): shortlex_key(g.letters) for g in cands}
    ordered = sorted(results.values(), key=lambda r: order.get(r["candidate"], (10**9,)))
    survivors = [r["candidate"] for r in ordered if r["verdict"] == "BlockedUpTo"]
    return {"rank": n, "max_len": max_len, "results": ordered, "survivors": survivors}
