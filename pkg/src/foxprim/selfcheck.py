"""Golden examples and small property suites, runnable as one batch.

Used by the ``verify-paper`` CLI command and scripts/verify_goldens.py.
Every check is exact and deterministic given the seed.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass

from . import delta, fox, maps, primitivity, whitehead
from .groupring import LaurentElement, int_det, laurent_det, parse_ring
from .sampling import random_derived_word, random_exponents
from .words import Word, parse

EXAMPLE_MAP = "x1->aC; x2->cbC; x3->c; x4->d"
EXAMPLE_U = "abABcdCD"
EXAMPLE_V = "abABbcBCcdCD"


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail,
                "seconds": round(self.seconds, 3)}


def check_example_automorphism() -> tuple[bool, str]:
    alpha = maps.parse_map(EXAMPLE_MAP, 4)
    u, v = parse(EXAMPLE_U, 4), parse(EXAMPLE_V, 4)
    image_ok = alpha(u) == v
    aut_ok = maps.is_automorphism(alpha)
    res = whitehead.same_orbit(u, v)
    orbit_ok = isinstance(res, whitehead.OrbitCertificate) and res.verify()
    nec = delta.delta_primitive_necessary(v)
    return (image_ok and aut_ok and orbit_ok and nec,
            f"alpha(u)={alpha(u)} aut={aut_ok} orbit={orbit_ok} necessary(v)={nec}")


def check_commutator_double_jacobian() -> tuple[bool, str]:
    u = parse("abAB", 2)
    d = fox.double_jacobian(u)
    table_ok = all(d.rows[i][j] == parse_ring(fox.DJAC_COMMUTATOR_F2[i][j], 2)
                   for i in range(2) for j in range(2))
    det = laurent_det(d.map(lambda e: e.abelianize()))
    det_ok = det == LaurentElement.monomial((-1, -1))
    return table_ok and det_ok, f"table={table_ok} det={det}"


def check_inverse_certificates() -> tuple[bool, str]:
    oks = []
    for m in (1, 2):
        u = delta.standard_symplectic_spec(m).word()
        oks.append(delta.verify_inverse_certificate(u, delta.symplectic_certificate(m)))
    # the example image v = alpha(u4) via the transported certificate
    alpha = maps.parse_map(EXAMPLE_MAP, 4)
    m_v = delta.transport_certificate(alpha, maps.inverse_automorphism(alpha), delta.symplectic_certificate(2))
    oks.append(delta.verify_inverse_certificate(parse(EXAMPLE_V, 4), m_v))
    return all(oks), f"u2={oks[0]} u4={oks[1]} v={oks[2]}"


def check_odd_rank(seed: int, count: int = 50) -> tuple[bool, str]:
    rng = random.Random(seed)
    done = 0
    for n in (3, 5):
        for _ in range(count):
            spec = delta.CommutatorProductSpec(n, random_exponents(rng, n))
            delta.odd_rank_obstruction(spec.word())
            delta.odd_rank_obstruction(random_derived_word(rng, n, 16))
            done += 2
    return True, f"{done} odd-rank elements obstructed"


def check_weight2_consistency(seed: int, count: int = 50) -> tuple[bool, str]:
    rng = random.Random(seed)
    for n in (2, 3, 4, 5):
        for _ in range(count):
            spec = delta.CommutatorProductSpec(n, random_exponents(rng, n))
            a = delta.weight2_matrix(spec)
            lin = fox.linearized_matrix(spec.word())
            if lin != [list(r) for r in zip(*a)]:
                return False, f"mismatch at {spec}"
    dets = [int_det(delta.weight2_matrix(delta.standard_symplectic_spec(m))) for m in (1, 2, 3)]
    return dets == [1, 1, 1], f"linearized = transpose of coefficient matrix; det(u_2m)={dets}"


def check_m2_examples() -> tuple[bool, str]:
    r1 = delta.delta_primitive_m2(parse("abAB", 2))
    r2 = delta.delta_primitive_m2(parse("aabABA", 2))
    r3 = delta.delta_primitive_m2(parse("abABabAB", 2))
    ok = (r1 == delta.DeltaPrimitive(1, (0, 0)) and r2 == delta.DeltaPrimitive(1, (1, 0))
          and isinstance(r3, delta.NotDeltaPrimitive))
    return ok, f"{r1} | {r2} | {r3}"


def check_blocking_fixtures() -> tuple[bool, str]:
    v1 = primitivity.blocking_verdict(parse("abAB", 2), 12)
    v2 = primitivity.blocking_verdict(parse("aabb", 2), 12)
    v3 = primitivity.blocking_verdict(parse("a", 2), 12)
    prims = list(primitivity.enumerate_primitives_f2(10))
    bad = [w for w in prims
           if w.letters[:4] in ((1, 2, -1, -2), (1, 1, 2, 2))]
    ok = (isinstance(v1, primitivity.BlockedProven) and isinstance(v2, primitivity.BlockedProven)
          and isinstance(v3, primitivity.Extendable) and not bad)
    return ok, f"{len(prims)} primitives up to length 10, {len(bad)} with a blocked prefix"


def check_orbit_harness() -> tuple[bool, str]:
    phi = maps.parse_map("x1->aa", 2)
    w = whitehead.orbit_violation_witness(phi, Word((1,), 2), 6)
    ident = whitehead.orbit_violation_witness(maps.Endomorphism.identity(2), Word((1,), 2), 6)
    return w is not None and ident is None, f"witness={w} identity={ident}"


def run_all(seed: int = 0) -> list[CheckResult]:
    checks = [
        ("example automorphism carries u4 to v", check_example_automorphism),
        ("double Jacobian of [x1,x2]", check_commutator_double_jacobian),
        ("inverse certificates for u2, u4 and v", check_inverse_certificates),
        ("odd-rank obstruction suite", lambda: check_odd_rank(seed)),
        ("weight-2 coefficient matrices", lambda: check_weight2_consistency(seed)),
        ("M2 decision examples", check_m2_examples),
        ("F2 blocking fixtures", check_blocking_fixtures),
        ("orbit preservation harness", check_orbit_harness),
    ]
    out = []
    for name, fn in checks:
        t = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as e:  # a raised TheoryViolation is a failed check
            ok, detail = False, f"{type(e).__name__}: {e}"
        out.append(CheckResult(name, ok, detail, time.perf_counter() - t))
    return out
