"""Delta-primitive elements: the free metabelian group, the rank-2 decision,
the odd-rank obstruction and inverse certificates over ZF_n.

An element u is Delta-primitive when its left Fox derivatives generate the
augmentation ideal as a right ideal. For u in F_n' the derivatives satisfy
d_j(u) = sum_k (x_k - 1) d'_k(d_j(u)), so generation is equivalent to
invertibility of the *generation matrix* G_u with entry (k, j) =
d'_k(d_j(u)). Note that G_u is the transpose of ``fox.double_jacobian(u)``
(entry (i, j) = d'_j(d_i(u))); over the noncommutative ring ZF_n the two are
not interchangeable, and already for u = [x1, x2] only G_u is invertible.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from typing import Sequence, Union

from .fox import abelian_left_gradient, double_jacobian, jacobian, linearized_matrix, right_jacobian
from .groupring import (
    LaurentElement,
    RingElement,
    RingMatrix,
    int_det,
    laurent_divide_exact,
    laurent_is_unit,
    matrix_from_json,
    parse_ring,
)
from .words import RankError, Word, abelianization, commutator, cyclic_core, min_rotation


class TheoryViolation(AssertionError):
    """A computation contradicted a proven statement; indicates a bug."""


# ---------------------------------------------------------------------------
# Magnus embedding of M_n = F_n / F_n''

@dataclass(frozen=True)
class MetabelianElement:
    abelianization: tuple[int, ...]
    derivatives: tuple[LaurentElement, ...]

    def __post_init__(self):
        n = len(self.abelianization)
        if len(self.derivatives) != n:
            raise ValueError("derivative vector length must equal the rank")
        lhs = LaurentElement.zero(n)
        for i, d in enumerate(self.derivatives, start=1):
            lhs = lhs + d * (LaurentElement.gen(i, n) - 1)
        if lhs != LaurentElement.monomial(self.abelianization) - 1:
            raise ValueError("Magnus identity fails: not the image of a group element")

    @property
    def rank(self) -> int:
        return len(self.abelianization)

    def __mul__(self, other: "MetabelianElement") -> "MetabelianElement":
        shift = LaurentElement.monomial(self.abelianization)
        return MetabelianElement(
            tuple(a + b for a, b in zip(self.abelianization, other.abelianization)),
            tuple(d + shift * e for d, e in zip(self.derivatives, other.derivatives)),
        )

    def inverse(self) -> "MetabelianElement":
        neg = tuple(-a for a in self.abelianization)
        shift = LaurentElement.monomial(neg)
        return MetabelianElement(neg, tuple(-(shift * d) for d in self.derivatives))

    def is_identity(self) -> bool:
        return not any(self.abelianization) and not any(self.derivatives)

    def in_derived_subgroup(self) -> bool:
        return not any(self.abelianization)


def project_to_metabelian(w: Word) -> MetabelianElement:
    return MetabelianElement(abelianization(w), tuple(abelian_left_gradient(w)))


# ---------------------------------------------------------------------------
# rank 2 decision

@dataclass(frozen=True)
class NotInDerivedSubgroup:
    abelianization: tuple[int, ...]


@dataclass(frozen=True)
class NotDeltaPrimitive:
    quotient: LaurentElement | None  # w with h = [x1,x2]^w, when it exists


@dataclass(frozen=True)
class DeltaPrimitive:
    sign: int
    conjugator_monomial: tuple[int, int]


DeltaPrimitivityResultM2 = Union[NotInDerivedSubgroup, NotDeltaPrimitive, DeltaPrimitive]


def delta_primitive_m2(w: Union[Word, MetabelianElement]) -> DeltaPrimitivityResultM2:
    """Decide Delta-primitivity of the image of w in M_2.

    In M_2 every element h of the derived subgroup is [x1, x2]^q for some q in
    Z[A_2], so the abelianized derivatives are q(1 - x2) and q(x1 - 1); h is
    Delta-primitive exactly when q is a unit ±x^g. DeltaPrimitive(sign, g)
    means h = c [x1, x2]^sign c^-1 in M_2 for any c with abelianization g.
    """
    h = w if isinstance(w, MetabelianElement) else project_to_metabelian(w)
    if h.rank != 2:
        raise RankError("the M_2 decision needs rank 2")
    if not h.in_derived_subgroup():
        return NotInDerivedSubgroup(h.abelianization)
    one_minus_x2 = 1 - LaurentElement.gen(2, 2)
    x1_minus_one = LaurentElement.gen(1, 2) - 1
    q = laurent_divide_exact(h.derivatives[0], one_minus_x2)
    if q is None or h.derivatives[1] != q * x1_minus_one:
        # impossible for genuine elements of M_2'
        raise TheoryViolation(f"derivatives {h.derivatives} are not a multiple of those of [x1,x2]")
    unit = laurent_is_unit(q)
    if unit is None:
        return NotDeltaPrimitive(q)
    sign, g = unit
    return DeltaPrimitive(sign, g)


def m2_witness_word(result: DeltaPrimitive) -> Word:
    """c [x1,x2]^sign c^-1 with c = x1^g1 x2^g2."""
    g1, g2 = result.conjugator_monomial
    c = Word([1] * g1 if g1 >= 0 else [-1] * -g1, 2) * Word([2] * g2 if g2 >= 0 else [-2] * -g2, 2)
    k = commutator(Word((1,), 2), Word((2,), 2)) ** result.sign
    return c * k * c.inverse()


def verify_m2_result(w: Word, result: DeltaPrimitive) -> bool:
    return project_to_metabelian(m2_witness_word(result)) == project_to_metabelian(w)


# ---------------------------------------------------------------------------
# weight-2 commutator products and the linear (mod Delta^2) test

@dataclass(frozen=True)
class CommutatorProductSpec:
    """Exponents of c_1 = [x1,x2], c_2 = [x1,x3], ..., c_N = [x_{n-1},x_n]."""

    rank: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        N = self.rank * (self.rank - 1) // 2
        if len(self.exponents) != N:
            raise ValueError(f"need {N} exponents for rank {self.rank}, got {len(self.exponents)}")

    def pairs(self) -> list[tuple[int, int]]:
        return list(combinations(range(1, self.rank + 1), 2))

    def word(self) -> Word:
        n = self.rank
        w = Word.identity(n)
        for (i, j), k in zip(self.pairs(), self.exponents):
            w = w * commutator(Word((i,), n), Word((j,), n)) ** k
        return w


def standard_symplectic_spec(m: int) -> CommutatorProductSpec:
    """Exponents for u_{2m} = [x1,x2][x3,x4]...[x_{2m-1},x_{2m}]."""
    n = 2 * m
    ks = tuple(1 if j == i + 1 and i % 2 == 1 else 0
               for i, j in combinations(range(1, n + 1), 2))
    return CommutatorProductSpec(n, ks)


def weight2_matrix(spec: CommutatorProductSpec) -> list[list[int]]:
    """Coefficient matrix read off the displayed derivative formulas:
    row i lists the coefficients of (x_j - 1) in d_i(w), with entry (i, j) =
    k_{(i,j)} above the diagonal and its negative below.

    With the convention [u, v] = u v u^-1 v^-1 used throughout this package,
    ``linearized_matrix(spec.word())`` is the transpose of this matrix.
    """
    n = spec.rank
    a = [[0] * n for _ in range(n)]
    for (i, j), k in zip(spec.pairs(), spec.exponents):
        a[i - 1][j - 1] = k
        a[j - 1][i - 1] = -k
    return a


def is_antisymmetric_zero_diagonal(a: Sequence[Sequence[int]]) -> bool:
    n = len(a)
    return all(a[i][i] == 0 for i in range(n)) and all(
        a[i][j] == -a[j][i] for i in range(n) for j in range(n))


def odd_rank_obstruction(w: Word) -> bool:
    """Confirm that w fails the mod-Delta^2 condition in odd rank.

    Returns True (obstructed). Raises TheoryViolation if the linearized
    matrix is ever not antisymmetric or has nonzero determinant.
    """
    if w.rank % 2 == 0:
        raise ValueError(f"rank {w.rank} is even")
    a = linearized_matrix(w)  # rejects nontrivial abelianization
    if not is_antisymmetric_zero_diagonal(a):
        raise TheoryViolation(f"linearized matrix of {w} is not antisymmetric")
    if int_det(a) != 0:
        raise TheoryViolation(f"linearized matrix of {w} has nonzero determinant in odd rank")
    return True


def delta_primitive_necessary(w: Word) -> bool:
    """Unimodularity of the linearized matrix; necessary for Delta-primitivity."""
    return abs(int_det(linearized_matrix(w))) == 1


# ---------------------------------------------------------------------------
# inverse certificates over ZF_n

def generation_matrix(u: Word) -> RingMatrix:
    """Entry (k, j) = d'_k(d_j(u)), so that (d_1 u, ..., d_n u) = (x_1 - 1, ..., x_n - 1) G_u."""
    d = double_jacobian(u)
    n = u.rank
    return RingMatrix([[d.rows[j][k] for j in range(n)] for k in range(n)])


def verify_inverse_certificate(u: Word, m: RingMatrix) -> bool:
    """Exact check that m is a two-sided inverse of G_u over ZF_n.

    A passing certificate proves u Delta-primitive (the derivatives of u are
    then an invertible recombination of the free basis x_k - 1 of Delta).
    """
    if any(abelianization(u)):
        raise ValueError(f"{u} has nontrivial abelianization")
    n = u.rank
    if m.shape != (n, n):
        raise ValueError(f"certificate shape {m.shape} does not match rank {n}")
    if m.rank != n:
        raise RankError(f"certificate rank {m.rank} vs word rank {n}")
    g = generation_matrix(u)
    return (g * m).is_identity() and (m * g).is_identity()


def _relabel(e: RingElement, offset: int, n: int) -> RingElement:
    return RingElement(
        {tuple(x + offset if x > 0 else x - offset for x in k): c for k, c in e.terms.items()}, n)


def commutator_inverse_f2() -> RingMatrix:
    """Recorded inverse of G_{[x1,x2]} over ZF_2 (found by bounded search,
    verified exactly in the tests)."""
    data = json.loads(resources.files("foxprim.data").joinpath("inverse_comm_f2.json").read_text())
    return matrix_from_json(data["inverse"], 2)


def symplectic_certificate(m: int) -> RingMatrix:
    """Inverse of G_u for u = [x1,x2]...[x_{2m-1},x_{2m}].

    G_u is block upper triangular with 2x2 diagonal blocks equal to relabelled
    copies of G_{[x1,x2]}; invert by back substitution.
    """
    n = 2 * m
    u = standard_symplectic_spec(m).word()
    g = generation_matrix(u)
    base = commutator_inverse_f2()
    zero = RingElement.zero(n)

    def block(mat, i, j):
        return [[mat.rows[2 * i + a][2 * j + b] for b in range(2)] for a in range(2)]

    def bmul(x, y):
        return [[x[a][0] * y[0][b] + x[a][1] * y[1][b] for b in range(2)] for a in range(2)]

    def badd(x, y):
        return [[x[a][b] + y[a][b] for b in range(2)] for a in range(2)]

    dinv = [[[_relabel(base.rows[a][b], 2 * k, n) for b in range(2)] for a in range(2)]
            for k in range(m)]
    v: dict[tuple[int, int], list] = {}
    for j in range(m):
        v[j, j] = dinv[j]
        for i in range(j - 1, -1, -1):
            acc = [[zero, zero], [zero, zero]]
            for t in range(i + 1, j + 1):
                acc = badd(acc, bmul(block(g, i, t), v[t, j]))
            v[i, j] = [[-e for e in row] for row in bmul(dinv[i], acc)]
    rows = [[zero] * n for _ in range(n)]
    for (i, j), b in v.items():
        for a in range(2):
            for c in range(2):
                rows[2 * i + a][2 * j + c] = b[a][c]
    return RingMatrix(rows)


def transport_certificate(alpha, alpha_inv, m: RingMatrix) -> RingMatrix:
    """Certificate for alpha(u) from a certificate m for u.

    G_{alpha(u)} = K_alpha alpha(G_u) J_alpha, and the chain rules give
    J_alpha^-1 = alpha(J_{alpha^-1}), K_alpha^-1 = alpha(K_{alpha^-1}); hence
    the inverse is alpha(J_{alpha^-1} m K_{alpha^-1}). The caller should
    still run verify_inverse_certificate on the result.
    """
    return (jacobian(alpha_inv) * m * right_jacobian(alpha_inv)).map(alpha.apply_ring)


def find_inverse_certificate(u: Word, max_len: int = 3, coeff_bound: int = 3) -> RingMatrix | None:
    """Best-effort search for an inverse of G_u with entries supported on
    words of length <= max_len and coefficients in [-coeff_bound, coeff_bound].

    Solves G_u M = I as an exact linear system over Q; a hit is returned only
    after the exact two-sided check. Practical for rank 2 and short u.
    """
    import sympy

    from .words import enumerate_reduced, mul_letters

    n = u.rank
    g = generation_matrix(u)
    support = [w.letters for w in enumerate_reduced(n, max_len)]
    keys = [(t, s) for t in range(n) for s in support]
    index = {k: i for i, k in enumerate(keys)}
    columns = []
    for col in range(n):
        eqs: dict[tuple, dict[int, int]] = {}
        for i in range(n):
            for t in range(n):
                for w, c in g.rows[i][t].terms.items():
                    for s in support:
                        row = eqs.setdefault((i, mul_letters(w, s)), {})
                        j = index[(t, s)]
                        row[j] = row.get(j, 0) + c
        eqs.setdefault((col, ()), {})
        rowkeys = list(eqs)
        a = sympy.SparseMatrix(len(rowkeys), len(keys),
                               {(r, j): v for r, k in enumerate(rowkeys) for j, v in eqs[k].items() if v})
        b = sympy.Matrix([1 if k == (col, ()) else 0 for k in rowkeys])
        try:
            sol, params = a.gauss_jordan_solve(b)
        except ValueError:
            return None
        sol = sol.subs({p: 0 for p in params})
        entries = [dict() for _ in range(n)]
        for (t, s), i in index.items():
            v = sol[i]
            if v != 0:
                if not v.is_integer or abs(int(v)) > coeff_bound:
                    return None
                entries[t][s] = int(v)
        columns.append([RingElement(e, n) for e in entries])
    m = RingMatrix([[columns[c][r] for c in range(n)] for r in range(n)])
    return m if verify_inverse_certificate(u, m) else None


# ---------------------------------------------------------------------------
# F_2 classification

_COMM_ROTATIONS = None


def _comm_rotations() -> set[tuple[int, ...]]:
    global _COMM_ROTATIONS
    if _COMM_ROTATIONS is None:
        out = set()
        for base in ((1, 2, -1, -2), (2, 1, -2, -1)):
            for r in range(4):
                out.add(base[r:] + base[:r])
        _COMM_ROTATIONS = out
    return _COMM_ROTATIONS


def classify_delta_primitive_f2(u: Word) -> bool:
    """u is a conjugate of [x1,x2] or [x2,x1]: its cyclic core is a rotation
    of x1 x2 x1^-1 x2^-1 or of x2 x1 x2^-1 x1^-1."""
    if u.rank != 2:
        raise RankError("the F_2 classification needs rank 2")
    core, _ = cyclic_core(u.letters)
    return core in _comm_rotations()
