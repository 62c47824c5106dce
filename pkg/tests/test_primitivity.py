import math

import pytest

from foxprim.primitivity import (
    BlockedProven,
    BlockedUpTo,
    Extendable,
    blocking_search,
    blocking_verdict,
    canonical_candidate,
    cmz_necessary_condition,
    default_candidates,
    enumerate_primitives_f2,
    is_primitive,
    syllables_cyclic,
)
from foxprim.sampling import random_automorphism, random_word
from foxprim.words import RankError, abelianization, enumerate_reduced, is_cyclically_reduced, parse


def W(s, n=2):
    return parse(s, n)


def test_is_primitive_examples():
    assert is_primitive(W("a"))
    assert is_primitive(W("aba"))
    assert not is_primitive(W("aabbb"))
    assert not is_primitive(W("abAB"))
    assert not is_primitive(W(""))
    assert is_primitive(W("abAc", 3))


def test_primitive_via_basis_completion():
    # aab is primitive: (aab, a) is a basis
    from foxprim.maps import Endomorphism, is_automorphism

    assert is_primitive(W("aab"))
    assert is_automorphism(Endomorphism((W("aab"), W("a"))))
    assert not is_primitive(W("aabb"))


def test_cmz_examples():
    assert cmz_necessary_condition(W("aab"))
    assert not cmz_necessary_condition(W("abAB"))
    assert not cmz_necessary_condition(W("aabb"))
    with pytest.raises(RankError):
        cmz_necessary_condition(W("abc", 3))


def test_syllables_wrap_around():
    assert syllables_cyclic(W("abaa").letters) == [(2, 1), (1, 3)]
    assert syllables_cyclic(W("aaa").letters) == [(1, 3)]


def test_enumerate_small():
    one = list(enumerate_primitives_f2(1))
    assert [str(w) for w in one] == ["a", "A", "b", "B"]
    two = list(enumerate_primitives_f2(2))
    assert len(two) == 12
    assert {str(w) for w in two} - {"a", "A", "b", "B"} == {
        "ab", "aB", "Ab", "AB", "ba", "bA", "Ba", "BA"}


def test_enumeration_methods_agree():
    a = [w.letters for w in enumerate_primitives_f2(8, "orbit")]
    b = [w.letters for w in enumerate_primitives_f2(8, "filter")]
    assert a == b
    with pytest.raises(ValueError):
        list(enumerate_primitives_f2(3, "magic"))


def test_exhaustive_properties_up_to_10():
    for w in enumerate_reduced(2, 10):
        if not w.letters or not is_primitive(w):
            continue
        assert math.gcd(*abelianization(w)) == 1
        assert cmz_necessary_condition(w)


def test_blocking_examples():
    v = blocking_verdict(W("abAB"), 10)
    assert isinstance(v, BlockedProven) and v.rule == "commutator"
    v = blocking_verdict(W("aabbb"), 10)
    assert isinstance(v, BlockedProven) and v.prefix == W("aabbb")
    v = blocking_verdict(W("a"), 10)
    assert isinstance(v, Extendable) and v.witness == W("a")
    v = blocking_verdict(W("aab"), 10)
    assert isinstance(v, Extendable) and v.witness.letters[:3] == (1, 1, 2)


def test_blocking_symmetric_images():
    # images of the certified families under signed permutations
    for s in ("BAba", "bbaa", "AAbb", "baBA"):
        assert isinstance(blocking_verdict(W(s), 8), BlockedProven)


def test_uncertified_search_agrees_with_families():
    # with the family rule switched off, the search finds nothing either
    for s in ("abAB", "aabb"):
        v = blocking_verdict(W(s), 10, certified=False)
        assert isinstance(v, BlockedUpTo) and v.bound == 10


def test_extendable_validates():
    with pytest.raises(ValueError):
        Extendable(W("aa"))
    with pytest.raises(ValueError):
        Extendable(W("ab"), prefix=W("b"))


def test_orbit_invariance(rng):
    for _ in range(40):
        alpha = random_automorphism(rng, 2, rng.randint(1, 5))
        w = random_word(rng, 2, 8, 1)
        assert is_primitive(w) == is_primitive(alpha(w))


def test_candidates_up_to_symmetry():
    cands = default_candidates(3, 2)
    assert [str(c) for c in cands] == ["a", "aa", "ab"]
    assert canonical_candidate(W("CbC", 3).letters, 3) == (1, 2, 1)


def test_blocking_search_rank_check():
    with pytest.raises(RankError):
        blocking_search(2, 5)


def test_blocking_search_small():
    res = blocking_search(3, 8, cand_len=2)
    assert res["survivors"] == []
    assert all(r["verdict"] == "Extendable" for r in res["results"])
    assert all(r["bound"] == 8 for r in res["results"])


def test_blocking_search_commutator_candidate():
    res = blocking_search(3, 8, candidates=[W("abAB", 3)])
    rec = res["results"][0]
    assert rec["bound"] == 8 and rec["verdict"] in ("Extendable", "BlockedUpTo")


def test_blocking_search_parallel_matches_serial():
    a = blocking_search(3, 8, cand_len=3)
    b = blocking_search(3, 8, cand_len=3, workers=2)
    assert a == b


def test_rank3_search_witness_prefix():
    v = blocking_verdict(W("abAB", 3), 8)
    assert isinstance(v, Extendable)
    assert v.witness.letters[:4] == (1, 2, -1, -2)
    assert is_cyclically_reduced(v.witness)
