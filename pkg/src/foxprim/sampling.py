"""Seeded random generators for words, maps and commutator products."""
from __future__ import annotations

import random

from .maps import Endomorphism
from .words import Word, commutator, reduce_letters


def random_word(rng: random.Random, n: int, max_len: int, min_len: int = 0) -> Word:
    """Reduced word of length in [min_len, max_len], uniform over lengths."""
    k = rng.randint(min_len, max_len)
    out: list[int] = []
    while len(out) < k:
        x = rng.choice([i for i in range(1, n + 1)] + [-i for i in range(1, n + 1)])
        if out and out[-1] == -x:
            continue
        out.append(x)
    return Word._trusted(tuple(out), n)


def random_derived_word(rng: random.Random, n: int, max_len: int) -> Word:
    """Element of F_n' of length <= max_len: a product of commutators of
    short random words, resampled until it fits."""
    while True:
        u = Word.identity(n)
        for _ in range(rng.randint(1, 3)):
            a = random_word(rng, n, 3, 1)
            b = random_word(rng, n, 3, 1)
            u = u * commutator(a, b)
        if len(u) <= max_len:
            return u


def random_exponents(rng: random.Random, n: int, lo: int = -2, hi: int = 2) -> tuple[int, ...]:
    return tuple(rng.randint(lo, hi) for _ in range(n * (n - 1) // 2))


def random_endomorphism(rng: random.Random, n: int, max_len: int) -> Endomorphism:
    return Endomorphism(tuple(random_word(rng, n, max_len) for _ in range(n)))


def elementary_nielsen(rng: random.Random, n: int) -> Endomorphism:
    """One elementary Nielsen map: x_i -> x_i x_j^{±1} or x_j^{±1} x_i,
    an inversion x_i -> x_i^-1, or a transposition."""
    imgs = [(i,) for i in range(1, n + 1)]
    kind = rng.randrange(4)
    i = rng.randrange(n)
    if kind == 2:
        imgs[i] = (-(i + 1),)
    elif kind == 3:
        j = rng.choice([k for k in range(n) if k != i])
        imgs[i], imgs[j] = imgs[j], imgs[i]
    else:
        j = rng.choice([k for k in range(n) if k != i])
        y = rng.choice((j + 1, -(j + 1)))
        imgs[i] = reduce_letters((i + 1, y) if kind == 0 else (y, i + 1))
    return Endomorphism.from_letters(imgs)


def random_automorphism(rng: random.Random, n: int, steps: int) -> Endomorphism:
    from .maps import compose

    phi = Endomorphism.identity(n)
    for _ in range(steps):
        phi = compose(phi, elementary_nielsen(rng, n))
    return phi
