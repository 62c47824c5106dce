"""Left and right Fox derivatives and the matrices built from them.

Conventions (n = rank):

    a - eps(a) = sum_i d_i(a) (x_i - 1)      left derivative d_i
    a - eps(a) = sum_i (x_i - 1) d'_i(a)     right derivative d'_i

On a reduced word the derivatives are read off in one scan: an occurrence of
x_i contributes the prefix before it (left) or the suffix after it (right);
an occurrence of x_i^-1 contributes minus the prefix through it (left) or minus
the suffix from it (right). Prefixes and suffixes of a reduced word are reduced,
so no cancellation work is needed.
"""
from __future__ import annotations

from collections import defaultdict

from .groupring import LaurentElement, RingElement, RingMatrix, abelianize, augmentation
from .words import Letters, RankError, Word, abelianization

# D_u for u = [x1, x2] = abAB, entry (i, j) = d'_j(d_i(u)). Derived from the
# two defining identities and frozen; the tests recompute it independently.
DJAC_COMMUTATOR_F2 = (
    ("A - bA", "-A"),
    ("1 - bAB + AB", "B - AB"),
)


def _as_ring(a) -> RingElement:
    if isinstance(a, Word):
        return RingElement.from_word(a)
    return a


def _check_index(i: int, n: int):
    if not 1 <= i <= n:
        raise RankError(f"derivative index {i} out of range for rank {n}")


def _left_word_into(acc: dict, u: Letters, i: int, coeff: int):
    for k, x in enumerate(u):
        if x == i:
            acc[u[:k]] += coeff
        elif x == -i:
            acc[u[: k + 1]] -= coeff


def _right_word_into(acc: dict, u: Letters, i: int, coeff: int):
    for k, x in enumerate(u):
        if x == i:
            acc[u[k + 1 :]] += coeff
        elif x == -i:
            acc[u[k:]] -= coeff


def left_derivative(a, i: int) -> RingElement:
    a = _as_ring(a)
    _check_index(i, a.rank)
    acc: dict[Letters, int] = defaultdict(int)
    for u, c in a.terms.items():
        _left_word_into(acc, u, i, c)
    return RingElement(acc, a.rank)


def right_derivative(a, i: int) -> RingElement:
    a = _as_ring(a)
    _check_index(i, a.rank)
    acc: dict[Letters, int] = defaultdict(int)
    for u, c in a.terms.items():
        _right_word_into(acc, u, i, c)
    return RingElement(acc, a.rank)


def left_gradient(a) -> list[RingElement]:
    a = _as_ring(a)
    return [left_derivative(a, i) for i in range(1, a.rank + 1)]


def right_gradient(a) -> list[RingElement]:
    a = _as_ring(a)
    return [right_derivative(a, i) for i in range(1, a.rank + 1)]


def abelian_left_gradient(w: Word) -> list[LaurentElement]:
    """Abelianized left derivatives of a word, accumulated directly on
    exponent vectors (one pass, no intermediate ring elements)."""
    n = w.rank
    acc = [defaultdict(int) for _ in range(n)]
    e = [0] * n
    for x in w.letters:
        g = abs(x) - 1
        if x > 0:
            acc[g][tuple(e)] += 1
            e[g] += 1
        else:
            e[g] -= 1
            acc[g][tuple(e)] -= 1
    return [LaurentElement(d, n) for d in acc]


def jacobian(phi) -> RingMatrix:
    """Entry (i, j) is d_j(phi(x_i))."""
    return RingMatrix([left_gradient(y) for y in phi.images])


def right_jacobian(phi) -> RingMatrix:
    """Entry (j, k) is d'_j(phi(x_k)), so (phi(x_1) - 1, ...) = (x_1 - 1, ...) K_phi."""
    grads = [right_gradient(y) for y in phi.images]
    n = len(grads)
    return RingMatrix([[grads[k][j] for k in range(n)] for j in range(n)])


def abelian_jacobian(phi) -> RingMatrix:
    return RingMatrix([abelian_left_gradient(y) for y in phi.images])


def double_jacobian(u: Word) -> RingMatrix:
    """Entry (i, j) is d'_j(d_i(u))."""
    return RingMatrix([right_gradient(d) for d in left_gradient(u)])


def linearized_matrix(u: Word) -> list[list[int]]:
    """Integer matrix with entry (i, j) = eps(d'_j(d_i(u))).

    That is the coefficient of (x_j - 1) in d_i(u) modulo Delta^2. Only
    meaningful when u has trivial abelianization, so other inputs are
    rejected. Computed without building D_u: for a word t,
    eps(d'_j(t)) is the exponent sum of x_j in t.
    """
    ab = abelianization(u)
    if any(ab):
        raise ValueError(f"word {u} has nonzero exponent sums {ab}; not in the derived subgroup")
    n = u.rank
    rows = []
    for d in left_gradient(u):
        row = [0] * n
        for t, c in d.terms.items():
            for x in t:
                row[abs(x) - 1] += c if x > 0 else -c
        rows.append(row)
    return rows


def augment_matrix(m: RingMatrix) -> list[list[int]]:
    return [[augmentation(e) for e in r] for r in m.rows]


def chain_rule_check(phi, u: Word) -> bool:
    """Check d_j(phi(u)) == sum_k phi(d_k(u)) d_j(phi(x_k)) for every j."""
    n = u.rank
    v = phi(u)
    du = left_gradient(u)
    phi_du = [phi.apply_ring(d) for d in du]
    img_grads = [left_gradient(y) for y in phi.images]
    for j in range(n):
        rhs = RingElement.zero(n)
        for k in range(n):
            if phi_du[k]:
                rhs = rhs + phi_du[k] * img_grads[k][j]
        if left_derivative(v, j + 1) != rhs:
            return False
    return True


def derivative_row_identity_check(phi, g: Word) -> bool:
    """Check the row identity (d_1(h), ..., d_n(h)) = (phi(d_1 g), ..., phi(d_n g)) J_phi
    with h = phi(g), via matrix multiplication."""
    h = phi(g)
    lhs = RingMatrix([left_gradient(h)])
    row = RingMatrix([[phi.apply_ring(d) for d in left_gradient(g)]])
    return row * jacobian(phi) == lhs


def fundamental_identity_left(a) -> RingElement:
    """``sum_i d_i(a)(x_i - 1) - (a - eps(a))``; zero for every a."""
    a = _as_ring(a)
    n = a.rank
    total = RingElement.zero(n)
    for i, d in enumerate(left_gradient(a), start=1):
        total = total + d * (RingElement.from_word(Word.generator(i, n)) - 1)
    return total - (a - augmentation(a))


def fundamental_identity_right(a) -> RingElement:
    a = _as_ring(a)
    n = a.rank
    total = RingElement.zero(n)
    for i, d in enumerate(right_gradient(a), start=1):
        total = total + (RingElement.from_word(Word.generator(i, n)) - 1) * d
    return total - (a - augmentation(a))
