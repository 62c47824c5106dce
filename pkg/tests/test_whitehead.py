import itertools

from hypothesis import given

from foxprim.maps import Endomorphism, is_automorphism, parse_map
from foxprim.sampling import random_automorphism, random_word
from foxprim.whitehead import (
    BudgetExhausted,
    OrbitCertificate,
    OrbitDisproof,
    WhiteheadMove,
    apply_move,
    canonical_class,
    enumerate_orbit,
    iter_moves,
    min_generator_support,
    minimal_length,
    minimize_cyclic,
    move_endomorphism,
    orbit_violation_witness,
    same_orbit,
    type2_moves,
    whitehead_minimize,
)
from foxprim.words import Word, cyclic_core, enumerate_reduced, is_cyclically_reduced, parse

from conftest import ranked_words


def W(s, n=2):
    return parse(s, n)


def test_minimize_examples():
    m, cert = whitehead_minimize(W("abA"))
    assert len(m) == 1 and cert.verify()
    assert minimal_length(W("aabbb")) == 5
    assert minimal_length(W("abAB")) == 4


def test_minimal_by_exhaustion():
    # no single type II move shortens x1^2 x2^3 or [x1, x2]
    for s in ("aabbb", "abAB"):
        u = W(s).letters
        for m, _ in type2_moves(2):
            core, _ = cyclic_core(apply_move(m, u))
            assert len(core) >= len(u)


def test_type2_move_count():
    for n in (2, 3, 4):
        assert len(type2_moves(n)) == 2 * n * (4 ** (n - 1) - 1)


def test_moves_are_automorphisms_with_inverses():
    for m in itertools.islice(iter_moves(3), 0, None, 7):
        phi = move_endomorphism(m, 3)
        assert is_automorphism(phi)
        inv = move_endomorphism(m.inverse(), 3)
        for i in range(1, 4):
            assert inv(phi(Word.generator(i, 3))) == Word.generator(i, 3)


def test_same_orbit_examples():
    u = W("abABcdCD", 4)
    v = W("abABbcBCcdCD", 4)
    res = same_orbit(u, v)
    assert isinstance(res, OrbitCertificate)
    assert res.replay() == v
    assert res.automorphism()(u) == v and is_automorphism(res.automorphism())
    assert isinstance(same_orbit(W("a"), W("ab")), OrbitCertificate)
    res = same_orbit(W("a"), W("aa"))
    assert isinstance(res, OrbitDisproof)


def test_same_orbit_disproof_same_length():
    # aabb and abAB are both minimal of length 4 but lie in different orbits
    res = same_orbit(W("aabb"), W("abAB"))
    assert isinstance(res, OrbitDisproof)


def test_budget_exhaustion_reported():
    u, v = W("abABcdCD", 4), W("aabbccdd", 4)
    assert isinstance(same_orbit(u, v, budget=1), BudgetExhausted)
    assert isinstance(same_orbit(u, v), OrbitDisproof)


def test_commutator_times_square_is_product_of_squares():
    res = same_orbit(W("abABcc", 3), W("aabbcc", 3))
    assert isinstance(res, OrbitCertificate) and res.verify()


def test_generator_support():
    assert min_generator_support(W("abA")).value == 1
    sb = min_generator_support(W("abAB"))
    assert (sb.value, sb.exact) == (2, True)
    sb = min_generator_support(W("abABcdCD", 4))
    assert (sb.value, sb.exact) == (4, True)
    sb = min_generator_support(W("abcC", 4))
    assert sb.value == 1


def test_orbit_enumeration_matches_filter():
    from foxprim.primitivity import is_primitive

    orbit = {w.letters for w in enumerate_orbit(W("a"), 7)}
    brute = {w.letters for w in enumerate_reduced(2, 7)
             if w.letters and is_cyclically_reduced(w) and is_primitive(w)}
    assert orbit == brute


def test_orbit_of_commutator_brute_force():
    # cyclically reduced elements of the orbit of [x1,x2] up to length 8
    orbit = {w.letters for w in enumerate_orbit(W("abAB"), 8)}
    brute = set()
    level = canonical_class(W("abAB").letters, 2)[0]
    for w in enumerate_reduced(2, 8):
        if w.letters and is_cyclically_reduced(w) and len(w) % 2 == 0:
            core, _ = minimize_cyclic(w.letters, 2)
            if len(core) == 4 and canonical_class(core, 2)[0] == level:
                brute.add(w.letters)
    assert orbit == brute
    # in F2 the orbit of the commutator is its conjugates and those of its inverse
    assert all(len(u) == 4 for u in orbit)


def test_orbit_violation_witness_examples():
    a = W("a")
    assert orbit_violation_witness(parse_map("x1->aa"), a, 8) == a
    assert orbit_violation_witness(parse_map("x1->abAB"), a, 8) == a
    assert orbit_violation_witness(Endomorphism.identity(2), a, 8) is None


@given(ranked_words(ranks=(2, 3), max_size=10))
def test_certificate_replays(w):
    m, cert = whitehead_minimize(w)
    assert cert.verify() and cert.replay() == m


def test_minimal_length_orbit_invariant(rng):
    for _ in range(60):
        n = rng.choice([2, 3])
        alpha = random_automorphism(rng, n, rng.randint(1, 6))
        w = random_word(rng, n, 10, 1)
        assert minimal_length(w) == minimal_length(alpha(w))


def test_same_orbit_on_random_images(rng):
    for _ in range(30):
        n = rng.choice([2, 3])
        alpha = random_automorphism(rng, n, rng.randint(1, 5))
        w = random_word(rng, n, 8, 1)
        res = same_orbit(w, alpha(w))
        assert isinstance(res, OrbitCertificate) and res.verify()


def test_proper_power_exclusion(rng):
    # an automorphism never sends a non-power s to a proper power of itself
    for _ in range(40):
        n = 2
        alpha = random_automorphism(rng, n, rng.randint(1, 6))
        s = random_word(rng, n, 6, 1)
        core, _ = cyclic_core(s.letters)
        k = len(core)
        if any(k % d == 0 and core == core[:d] * (k // d) for d in range(1, k)):
            continue
        img = alpha(s)
        for p in (2, 3):
            assert img != s ** p


def test_whitehead_move_describe():
    m = WhiteheadMove(1, (0, 3))
    assert m.describe() == "wh(a; x2:conj)"
    assert m.inverse().inverse() == m
