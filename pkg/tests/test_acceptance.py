"""Acceptance criteria 1-11 with their time limits.

Each test records one PASS/FAIL line; the lines are printed together at the
end of the module through the terminal reporter, so they show without -s.
"""
import json
import random
import time

import pytest

from foxprim import delta, fox, maps, primitivity, whitehead
from foxprim.cli import dispatch
from foxprim.groupring import LaurentElement, RingElement, abelianize, augmentation, int_det, laurent_det, laurent_is_unit
from foxprim.sampling import (
    elementary_nielsen,
    random_automorphism,
    random_derived_word,
    random_endomorphism,
    random_exponents,
    random_word,
)
from foxprim.words import (
    Word,
    abelianization,
    commutator,
    enumerate_reduced,
    is_cyclically_reduced,
    is_prefix_no_cancellation,
    parse,
    signed_permutations,
    apply_letter_map,
)

SEED = 20261018
_LINES: dict[int, str] = {}


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    tr = request.config.pluginmanager.getplugin("terminalreporter")
    lines = [_LINES[k] for k in sorted(_LINES)]
    if tr is not None:
        tr.write_line("")
        for line in lines:
            tr.write_line(line)
    else:
        print("\n".join(lines))


class Criterion:
    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit
        self.detail = ""

    def __enter__(self):
        self.t0 = time.perf_counter()
        _LINES[self.number] = f"FAIL  criterion {self.number:2d}: {self.title} (did not finish)"
        return self

    def __exit__(self, exc_type, exc, tb):
        dt = time.perf_counter() - self.t0
        ok = exc_type is None and dt < self.limit
        why = ""
        if exc_type is not None:
            why = f" [{exc_type.__name__}: {str(exc)[:120]}]"
        elif dt >= self.limit:
            why = f" [over the {self.limit:.0f}s limit]"
        _LINES[self.number] = (f"{'PASS' if ok else 'FAIL'}  criterion {self.number:2d}: {self.title}"
                               f" | {self.detail} | {dt:.2f}s{why}")
        if exc_type is None and not ok:
            pytest.fail(f"criterion {self.number} took {dt:.1f}s, limit {self.limit}s")
        return False


def X(i, n):
    return RingElement.from_word(Word.generator(i, n))


# 1 -------------------------------------------------------------------------

def test_c01_fox_identities():
    with Criterion(1, "Fox defining identities, F2 and F4", 30) as c:
        rng = random.Random(SEED + 1)
        count = 0
        for n in (2, 4):
            for _ in range(1000):
                w = random_word(rng, n, 20)
                a = RingElement.from_word(w)
                lhs = a - augmentation(a)
                left = sum((fox.left_derivative(w, i) * (X(i, n) - 1) for i in range(1, n + 1)),
                           RingElement.zero(n))
                right = sum(((X(i, n) - 1) * fox.right_derivative(w, i) for i in range(1, n + 1)),
                            RingElement.zero(n))
                assert left == lhs, w
                assert right == lhs, w
                count += 1
        c.detail = f"{count} words, both identities exact"


# 2 -------------------------------------------------------------------------

def test_c02_chain_rule_and_row_identity():
    with Criterion(2, "chain rule and derivative row identity", 60) as c:
        rng = random.Random(SEED + 2)
        count = 0
        for k in range(500):
            n = 2 if k % 2 else 3
            phi = random_endomorphism(rng, n, 5)
            u = random_word(rng, n, 10)
            assert fox.chain_rule_check(phi, u), (phi, u)
            assert fox.derivative_row_identity_check(phi, u), (phi, u)
            # the Fox identity for the image, evaluated through the composed gradient
            v = phi(u)
            grads = [fox.left_derivative(v, j) for j in range(1, n + 1)]
            total = sum((g * (X(j, n) - 1) for j, g in zip(range(1, n + 1), grads)), RingElement.zero(n))
            assert total == RingElement.from_word(v) - 1
            count += 1
        c.detail = f"{count} (phi, u) pairs"


# 3 -------------------------------------------------------------------------

def test_c03_example_automorphism():
    with Criterion(3, "automorphism carries [x1,x2][x3,x4] to [x1,x2][x2,x3][x3,x4]", 60) as c:
        n = 4
        a, b, cc, d = (Word.generator(i, n) for i in range(1, 5))
        u = commutator(a, b) * commutator(cc, d)
        v = commutator(a, b) * commutator(b, cc) * commutator(cc, d)
        alpha = maps.parse_map("x1->aC; x2->cbC; x3->c; x4->d", n)
        assert alpha(u) == v
        assert maps.is_automorphism(alpha)
        res = whitehead.same_orbit(u, v, budget=10**6)
        assert isinstance(res, whitehead.OrbitCertificate) and res.verify() and res.replay() == v
        c.detail = f"alpha(u) = {v}, is_automorphism, orbit certificate with {len(res.moves)} moves"


# 4 -------------------------------------------------------------------------

def test_c04_double_jacobian_fixture():
    with Criterion(4, "double Jacobian of [x1,x2] and its abelianized determinant", 1) as c:
        from foxprim.groupring import parse_ring

        u = parse("abAB", 2)
        D = fox.double_jacobian(u)
        table = [[parse_ring(t, 2) for t in row] for row in fox.DJAC_COMMUTATOR_F2]
        assert D.rows == table
        # each entry re-derived from the definition D(i, j) = d'_j(d_i u)
        for i in range(2):
            for j in range(2):
                assert D.rows[i][j] == fox.right_derivative(fox.left_derivative(u, i + 1), j + 1)
        det = laurent_det(D.map(abelianize))
        assert det == LaurentElement.monomial((-1, -1))
        assert laurent_is_unit(det) == (1, (-1, -1))
        c.detail = "table matches, det = x1^-1 x2^-1"


# 5 -------------------------------------------------------------------------

def test_c05_odd_rank_and_weight2():
    with Criterion(5, "odd-rank obstruction and weight-2 determinants", 120) as c:
        rng = random.Random(SEED + 5)
        counts = {}
        for n in (3, 5):
            k = 0
            for _ in range(200):
                spec = delta.CommutatorProductSpec(n, random_exponents(rng, n))
                a = fox.linearized_matrix(spec.word())
                assert delta.is_antisymmetric_zero_diagonal(a) and int_det(a) == 0
                assert delta.odd_rank_obstruction(spec.word())
                k += 1
            for _ in range(200):
                w = random_derived_word(rng, n, 16)
                assert len(w) <= 16 and not any(abelianization(w))
                a = fox.linearized_matrix(w)
                assert delta.is_antisymmetric_zero_diagonal(a) and int_det(a) == 0
                assert delta.odd_rank_obstruction(w)
                k += 1
            counts[n] = k
        dets = {}
        for m in (1, 2, 3):
            dets[2 * m] = int_det(delta.weight2_matrix(delta.standard_symplectic_spec(m)))
            assert dets[2 * m] == 1
        c.detail = f"elements checked {counts}, det weight2(u_2m) = {dets}"


# 6 -------------------------------------------------------------------------

def _conj(g: Word, h: Word) -> Word:
    return g * h * g.inverse()


def test_c06_m2_decision():
    with Criterion(6, "Delta-primitivity decision in M2", 60) as c:
        rng = random.Random(SEED + 6)
        comm = parse("abAB", 2)
        pos = 0
        for _ in range(100):
            g = random_word(rng, 2, 8)
            e = rng.choice([1, -1])
            h = _conj(g, comm ** e)
            r = delta.delta_primitive_m2(h)
            assert isinstance(r, delta.DeltaPrimitive)
            assert r.sign == e and r.conjugator_monomial == abelianization(g)
            assert delta.project_to_metabelian(delta.m2_witness_word(r)) == delta.project_to_metabelian(h)
            pos += 1
        for k in range(2, 6):
            r = delta.delta_primitive_m2(comm ** k)
            assert isinstance(r, delta.NotDeltaPrimitive) and r.quotient == LaurentElement.constant(k, 2)
        neg = 0
        while neg < 100:
            # h = prod [x1,x2]^(e_i g_i), quotient q = sum e_i x^ab(g_i)
            h, q = Word.identity(2), LaurentElement.zero(2)
            for _ in range(rng.randint(2, 4)):
                g = random_word(rng, 2, 5)
                e = rng.choice([1, -1])
                h = h * _conj(g, comm ** e)
                q = q + e * LaurentElement.monomial(abelianization(g))
            if not q or laurent_is_unit(q) is not None:
                continue
            r = delta.delta_primitive_m2(h)
            assert isinstance(r, delta.NotDeltaPrimitive) and r.quotient == q
            neg += 1
        c.detail = f"{pos} conjugates recovered, [x1,x2]^2..5 rejected, {neg} non-unit quotients rejected"


# 7 -------------------------------------------------------------------------

def test_c07_f2_classification():
    with Criterion(7, "F2 Delta-primitive classification up to length 10", 300) as c:
        rotations = set()
        for base in ((1, 2, -1, -2), (2, 1, -2, -1)):
            rotations |= {base[r:] + base[:r] for r in range(4)}
        total = accepted = 0
        for w in enumerate_reduced(2, 10):
            if not w.letters or not is_cyclically_reduced(w):
                continue
            total += 1
            acc = delta.classify_delta_primitive_f2(w)
            assert acc == (w.letters in rotations), w
            if acc:
                accepted += 1
                assert delta.delta_primitive_necessary(w)
                assert isinstance(delta.delta_primitive_m2(w), delta.DeltaPrimitive)
        assert accepted == 8
        c.detail = f"{total} cyclically reduced words, {accepted} accepted"


# 8 -------------------------------------------------------------------------

def test_c08_primitives_and_blocking_families():
    with Criterion(8, "primitives of F2 up to length 14, CMZ and blocking families", 600) as c:
        by_len: dict[int, int] = {}
        fams = [parse("abAB", 2), parse("aabb", 2)]
        images = {apply_letter_map(f.letters, m) for f in fams for m in signed_permutations(2)}
        images = [Word(u, 2) for u in images]
        total = 0
        for w in primitivity.enumerate_primitives_f2(14):
            total += 1
            by_len[len(w)] = by_len.get(len(w), 0) + 1
            assert primitivity.cmz_necessary_condition(w), w
            for f in fams:
                assert not is_prefix_no_cancellation(f, w), w
            for f in images:
                assert not is_prefix_no_cancellation(f, w), w
        # cumulative counts: 4 of length 1, 4 + 8 = 12 of length <= 2
        upto1, upto2 = by_len[1], by_len[1] + by_len[2]
        assert (upto1, upto2) == (4, 12)
        assert total == sum(by_len.values()) and max(by_len) == 14
        c.detail = f"{total} primitives, counts up to length 1, 2 = {upto1}, {upto2}"


# 9 -------------------------------------------------------------------------

NON_AUTOMORPHIC = [
    "x1->aa",
    "x1->abAB",
    "x2->a",
    "x2->bb",
    "x1->ab; x2->ba",
    "x2->bab",
    "x1->aaa",
    "x1->b",
    "x1->aba",
    "x1->aa; x2->bb",
    "x1->abAB; x2->aabAAB",
    "x1->abAB; x2->baBA",
]


def test_c09_orbit_harness():
    with Criterion(9, "orbit-preservation harness on F2", 300) as c:
        a = parse("a", 2)
        found = 0
        for text in NON_AUTOMORPHIC:
            phi = maps.parse_map(text, 2)
            assert not maps.is_automorphism(phi), text
            v = whitehead.orbit_violation_witness(phi, a, 8)
            assert v is not None, text
            assert len(v) <= 8 and primitivity.is_primitive(v) and not primitivity.is_primitive(phi(v)), text
            found += 1
        rng = random.Random(SEED + 9)
        auts = [maps.Endomorphism.identity(2)] + [random_automorphism(rng, 2, rng.randint(1, 6)) for _ in range(11)]
        for phi in auts:
            assert maps.is_automorphism(phi)
            assert whitehead.orbit_violation_witness(phi, a, 8) is None, phi
        c.detail = f"{found} non-automorphisms with witnesses, {len(auts)} automorphisms without"


# 10 ------------------------------------------------------------------------

def test_c10_recognition_cross_checks():
    with Criterion(10, "automorphism and monomorphism recognition", 120) as c:
        rng = random.Random(SEED + 10)
        for k in range(200):
            n = (2, 3, 4)[k % 3]
            phi = elementary_nielsen(rng, n)
            for _ in range(rng.randint(0, 7)):
                phi = maps.compose(phi, elementary_nielsen(rng, n))
            assert maps.is_automorphism(phi)
            assert maps.is_monomorphism(phi)
            assert maps.abelian_jacobian_unit(phi) is not None
        sq = maps.parse_map("x1->aa; x2->b", 2)
        u2 = parse("abAB", 2)
        assert maps.is_monomorphism(sq)
        assert not maps.is_automorphism(sq)
        assert sq(u2) != u2
        c.detail = f"200 Nielsen composites; x1->x1^2: mono, not aut, sends u2 to {sq(u2)}"


# 11 ------------------------------------------------------------------------

def test_c11_block_search_smoke(tmp_path, capsys):
    with Criterion(11, "block-search rank 3, candidates up to length 4, extensions up to 10", 600) as c:
        outs = [tmp_path / "r1.json", tmp_path / "r2.json"]
        for p in outs:
            status, _ = dispatch(["prim", "block-search", "--rank", "3", "--cand-len", "4",
                                  "--max-len", "10", "--out", str(p)])
            capsys.readouterr()
            assert status == 0
        assert outs[0].read_bytes() == outs[1].read_bytes()
        rep = json.loads(outs[0].read_text())
        short = [r for r in rep["results"] if len(r["candidate"]) <= 2]
        assert short and all(r["verdict"] == "Extendable" for r in short)
        c.detail = (f"{rep['candidates']} candidates, {len(rep['survivors'])} survivors, "
                    f"{len(short)} of length <= 2 all Extendable, report reproducible")
