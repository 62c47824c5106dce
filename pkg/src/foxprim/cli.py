"""foxprim command-line front end.

Exit status: 0 when a verdict or result was produced, 1 when a verification
failed (bad certificate, failed identity, failed golden check), 2 on usage
errors (bad syntax, rank mismatch, unreadable files).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from . import delta, fox, maps, primitivity, whitehead
from .checkpoint import Checkpoint, CheckpointError, CheckpointWriter
from .groupring import (
    LaurentElement,
    RingMatrix,
    format_laurent,
    format_ring,
    laurent_to_json,
    matrix_from_json,
    matrix_to_json,
    ring_to_json,
)
from .words import (
    ParseError,
    RankError,
    Word,
    abelianization,
    cyclic_reduce,
    format_word,
    infer_rank,
    parse,
    word_to_json,
)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    rank: int | None = None
    max_len: int | None = None
    cand_len: int = 2
    budget: int = whitehead.DEFAULT_BUDGET
    workers: int = 1
    json: bool = False
    checkpoint: str | None = None
    resume: str | None = None
    out: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.budget <= 0:
            raise UsageError("--budget must be positive")
        if self.workers <= 0:
            raise UsageError("--workers must be positive")
        if self.max_len is not None and self.max_len < 0:
            raise UsageError("--max-len must be non-negative")

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        workers = ns.workers
        if workers is None:
            env = os.environ.get("FOXPRIM_WORKERS")
            try:
                workers = int(env) if env else 1
            except ValueError:
                raise UsageError(f"FOXPRIM_WORKERS={env!r} is not an integer") from None
        return cls(rank=ns.rank, max_len=ns.max_len, cand_len=ns.cand_len, budget=ns.budget,
                   workers=workers, json=ns.json, checkpoint=ns.checkpoint, resume=ns.resume,
                   out=ns.out, seed=ns.seed)


class Report:
    """Collects a result; prints plain text or JSON with version/seed/bounds."""

    def __init__(self, cfg: RunConfig, command: str):
        self.cfg = cfg
        self.data: dict = {"command": command}
        self.lines: list[str] = []
        self.status = 0

    def put(self, key, value, text: str | None = None):
        self.data[key] = value
        if text is not None:
            self.lines.append(text)

    def say(self, text: str):
        self.lines.append(text)

    def fail(self):
        self.status = 1

    def envelope(self) -> dict:
        c = self.cfg
        return {"version": __version__, "seed": c.seed,
                "bounds": {"rank": c.rank, "max_len": c.max_len, "budget": c.budget},
                **self.data}

    def emit(self):
        if self.cfg.json:
            print(json.dumps(self.envelope(), indent=2))
        else:
            for line in self.lines:
                print(line)


# ---------------------------------------------------------------------------
# argument helpers

def _rank(cfg: RunConfig, *texts: str) -> int:
    need = infer_rank(*texts)
    if cfg.rank is None:
        cfg.rank = need
    elif need > cfg.rank:
        raise RankError(f"input mentions x{need} but --rank is {cfg.rank}")
    return cfg.rank


def _map_rank_texts(text: str) -> list[str]:
    import re

    parts = []
    for clause in text.split(";"):
        if "->" in clause:
            lhs, rhs = clause.split("->", 1)
            m = re.search(r"\d+", lhs)
            if m:
                parts.append(f"x{m.group(0)}")
            parts.append(rhs)
    return parts


def _map(cfg: RunConfig, text: str) -> maps.Endomorphism:
    return maps.parse_map(text, _rank(cfg, *_map_rank_texts(text)))


def _word(cfg: RunConfig, text: str) -> Word:
    return parse(text, _rank(cfg, text))


def _load_matrix(ns, n: int) -> RingMatrix:
    if not ns.inverse:
        raise UsageError(f"delta {ns.op} needs --inverse <matrix-file>")
    try:
        data = json.loads(Path(ns.inverse).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read matrix file: {e}") from None
    if isinstance(data, dict):
        data = data["inverse"]
    return matrix_from_json(data, n)


def _matrix_text(m: RingMatrix) -> list[str]:
    fmt = format_laurent if m.kind is LaurentElement else format_ring
    return ["[" + ", ".join(fmt(e) for e in row) + "]" for row in m.rows]


def _need_max_len(cfg: RunConfig, default: int | None = None) -> int:
    if cfg.max_len is None:
        if default is None:
            raise UsageError("--max-len is required")
        cfg.max_len = default
    return cfg.max_len


# ---------------------------------------------------------------------------
# commands

def cmd_word(cfg, ns, rep: Report):
    w = _word(cfg, ns.word)
    cr = cyclic_reduce(w)
    rep.put("word", format_word(w), format_word(w))
    rep.put("json", word_to_json(w))
    rep.put("length", len(w), f"length {len(w)}")
    rep.put("abelianization", list(abelianization(w)), f"abelianization {list(abelianization(w))}")
    rep.put("cyclic_core", format_word(cr.core),
            f"cyclic core {format_word(cr.core)} conjugator {format_word(cr.conjugator)}")
    rep.put("conjugator", format_word(cr.conjugator))


def cmd_fox(cfg, ns, rep: Report):
    op = ns.op
    if op in ("left", "right"):
        try:
            i = int(ns.extra)
        except (TypeError, ValueError):
            raise UsageError(f"fox {op} needs an integer generator index") from None
        w = _word(cfg, ns.arg)
        f = fox.left_derivative if op == "left" else fox.right_derivative
        d = f(w, i)
        rep.put("derivative", ring_to_json(d), format_ring(d))
    elif op == "jacobian":
        m = fox.jacobian(_map(cfg, ns.arg))
        rep.put("matrix", matrix_to_json(m))
        rep.lines += _matrix_text(m)
    elif op == "djac":
        m = fox.double_jacobian(_word(cfg, ns.arg))
        rep.put("matrix", matrix_to_json(m))
        rep.lines += _matrix_text(m)
    elif op == "linmat":
        a = fox.linearized_matrix(_word(cfg, ns.arg))
        rep.put("matrix", a)
        rep.lines += [str(r) for r in a]
    elif op == "chain":
        if ns.extra is None:
            raise UsageError("fox chain needs <map> <word>")
        phi = _map(cfg, ns.arg)
        u = parse(ns.extra, phi.rank)
        ok = fox.chain_rule_check(phi, u) and fox.derivative_row_identity_check(phi, u)
        rep.put("holds", ok, "chain rule holds" if ok else "chain rule FAILS")
        if not ok:
            rep.fail()


def cmd_map(cfg, ns, rep: Report):
    if ns.op == "apply":
        phi = _map(cfg, ns.first)
        w = parse(ns.second, phi.rank)
        img = phi(w)
        rep.put("image", format_word(img), format_word(img))
    else:
        _rank(cfg, *_map_rank_texts(ns.first), *_map_rank_texts(ns.second))
        phi, psi = _map(cfg, ns.first), _map(cfg, ns.second)
        c = maps.compose(phi, psi)
        rep.put("composite", maps.format_map(c), maps.format_map(c))


def cmd_aut(cfg, ns, rep: Report):
    phi = _map(cfg, ns.map)
    ok = maps.is_automorphism(phi)
    rep.put("automorphism", ok, "automorphism" if ok else "not an automorphism")
    unit = maps.abelian_jacobian_unit(phi)
    rep.put("abelian_jacobian_unit", unit is not None)


def cmd_mono(cfg, ns, rep: Report):
    phi = _map(cfg, ns.map)
    r = maps.subgroup_rank(phi.images)
    ok = r == phi.rank
    rep.put("monomorphism", ok, "monomorphism" if ok else f"not injective (image rank {r})")
    rep.put("image_rank", r)


def cmd_orbit(cfg, ns, rep: Report):
    if ns.op == "min":
        w = _word(cfg, ns.first)
        m, cert = whitehead.whitehead_minimize(w)
        rep.put("minimal", format_word(m), f"minimal {format_word(m)} (length {len(m)})")
        rep.put("certificate", cert.to_json())
        sb = whitehead.min_generator_support(w, cfg.budget)
        rep.put("generator_support", asdict(sb),
                f"generator support {'=' if sb.exact else '<='} {sb.value}")
    elif ns.op == "same":
        if ns.second is None:
            raise UsageError("orbit same needs two words")
        _rank(cfg, ns.first, ns.second)
        u, v = _word(cfg, ns.first), _word(cfg, ns.second)
        res = whitehead.same_orbit(u, v, cfg.budget)
        rep.put("result", res.to_json())
        if isinstance(res, whitehead.OrbitCertificate):
            rep.put("same_orbit", True, f"same orbit ({len(res.moves)} moves, verified)")
        elif isinstance(res, whitehead.OrbitDisproof):
            rep.put("same_orbit", False, f"different orbits: {res.reason}")
        else:
            rep.put("same_orbit", None, f"undecided: budget exhausted after {res.nodes} nodes")
    else:
        if ns.second is None:
            raise UsageError("orbit witness needs <map> <word>")
        phi = _map(cfg, ns.first)
        u = parse(ns.second, phi.rank)
        L = _need_max_len(cfg, 8)
        wit = whitehead.orbit_violation_witness(phi, u, L, cfg.budget)
        if wit is None:
            rep.put("witness", None, f"no witness up to length {L}")
        else:
            rep.put("witness", format_word(wit),
                    f"witness {format_word(wit)}: image {format_word(phi(wit))} leaves the orbit")


def _verdict_text(g, v) -> str:
    if isinstance(v, primitivity.Extendable):
        return f"{g}: extendable, witness {v.witness}"
    if isinstance(v, primitivity.BlockedProven):
        return f"{g}: blocking (certified family {v.rule}, prefix {v.prefix})"
    return f"{g}: no primitive extension up to length {v.bound} ({v.nodes_explored} nodes)"


def cmd_prim(cfg, ns, rep: Report):
    if ns.op == "check":
        w = _word(cfg, ns.word)
        ok = primitivity.is_primitive(w)
        rep.put("primitive", ok, "primitive" if ok else "not primitive")
    elif ns.op == "enum":
        L = _need_max_len(cfg)
        cfg.rank = 2
        ws = list(primitivity.enumerate_primitives_f2(L))
        rep.put("count", len(ws), f"{len(ws)} cyclically reduced primitives of F2 up to length {L}")
        rep.put("words", [str(w) for w in ws])
        if ns.list:
            rep.lines += [str(w) for w in ws]
    elif ns.op == "block":
        g = _word(cfg, ns.word)
        L = _need_max_len(cfg)
        v = primitivity.blocking_verdict(g, L)
        rep.put("result", primitivity.verdict_record(g, v, L), _verdict_text(g, v))
    else:
        _block_search(cfg, rep)


def _block_search(cfg: RunConfig, rep: Report):
    n = cfg.rank if cfg.rank is not None else 3
    cfg.rank = n
    L = _need_max_len(cfg)
    params = {"cand_len": cfg.cand_len, "max_len": L}
    done = {}
    ck = Checkpoint(n, params)
    if cfg.resume:
        ck = Checkpoint.load(cfg.resume, rank=n, params=params)
        done = ck.done()
    sink = None
    path = cfg.checkpoint or cfg.resume
    if path:
        sink = CheckpointWriter(path, ck, every=8)
    res = primitivity.blocking_search(n, L, cand_len=cfg.cand_len, sink=sink,
                                      workers=cfg.workers, done=done)
    if sink:
        sink.flush()
    report = {"version": __version__, "seed": cfg.seed, "rank": n, "cand_len": cfg.cand_len,
              "max_len": L, "candidates": len(res["results"]), "resumed": len(done),
              "results": res["results"], "survivors": res["survivors"]}
    if cfg.out:
        Path(cfg.out).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    rep.put("report", report)
    counts: dict[str, int] = {}
    for r in res["results"]:
        counts[r["verdict"]] = counts.get(r["verdict"], 0) + 1
    rep.say(f"rank {n}, candidates up to length {cfg.cand_len}, extensions up to length {L}")
    rep.say("verdicts: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    rep.say(f"survivors ({len(res['survivors'])}): " + " ".join(res["survivors"]))
    rep.say("survivors are bounded-search evidence only, not proofs of blocking")


def cmd_delta(cfg, ns, rep: Report):
    op = ns.op
    if op == "m2":
        cfg.rank = cfg.rank or 2
        w = _word(cfg, ns.word)
        r = delta.delta_primitive_m2(w)
        if isinstance(r, delta.DeltaPrimitive):
            g = r.conjugator_monomial
            rep.put("result", {"verdict": "DeltaPrimitive", "sign": r.sign, "monomial": list(g)},
                    f"Delta-primitive in M2: [x1,x2]^{r.sign} conjugated by x1^{g[0]} x2^{g[1]}")
        elif isinstance(r, delta.NotDeltaPrimitive):
            rep.put("result", {"verdict": "NotDeltaPrimitive",
                               "quotient": laurent_to_json(r.quotient) if r.quotient is not None else None},
                    f"not Delta-primitive in M2 (quotient {format_laurent(r.quotient)} is not a unit)")
        else:
            rep.put("result", {"verdict": "NotInDerivedSubgroup", "abelianization": list(r.abelianization)},
                    f"not in the derived subgroup (abelianization {list(r.abelianization)})")
    elif op == "necessary":
        w = _word(cfg, ns.word)
        a = fox.linearized_matrix(w)
        ok = delta.delta_primitive_necessary(w)
        rep.put("matrix", a)
        rep.put("necessary_condition", ok,
                "linearized matrix unimodular" if ok else "fails: linearized matrix not unimodular")
        if ok and w.rank >= 4:
            rep.say("note: sufficiency over ZF_n and M_n (n >= 4) is not decided; supply a certificate")
    elif op == "certify":
        w = _word(cfg, ns.word)
        m = _load_matrix(ns, w.rank)
        ok = delta.verify_inverse_certificate(w, m)
        rep.put("certified", ok, "certificate verified: Delta-primitive" if ok else "certificate rejected")
        if not ok:
            rep.fail()
    elif op == "transport":
        if not ns.map:
            raise UsageError("delta transport needs --map <automorphism>")
        n = _rank(cfg, ns.word, *_map_rank_texts(ns.map))
        w, alpha = parse(ns.word, n), maps.parse_map(ns.map, n)
        m = _load_matrix(ns, n)
        if not delta.verify_inverse_certificate(w, m):
            raise UsageError("the supplied matrix is not a certificate for the word")
        v = alpha(w)
        m_v = delta.transport_certificate(alpha, maps.inverse_automorphism(alpha), m)
        ok = delta.verify_inverse_certificate(v, m_v)
        rep.put("image", str(v), f"image: {v}")
        rep.put("inverse", matrix_to_json(m_v), "\n".join(_matrix_text(m_v)))
        rep.put("certified", ok, "transported certificate verified" if ok else "transported certificate rejected")
        if not ok:
            rep.fail()
    elif op == "odd":
        w = _word(cfg, ns.word)
        ok = delta.odd_rank_obstruction(w)
        rep.put("obstructed", ok, "obstructed: linearized matrix antisymmetric with determinant 0")
    elif op == "f2":
        cfg.rank = cfg.rank or 2
        w = _word(cfg, ns.word)
        ok = delta.classify_delta_primitive_f2(w)
        rep.put("delta_primitive", ok,
                "Delta-primitive (conjugate of [x1,x2]^{±1})" if ok else "not Delta-primitive")


def cmd_verify(cfg, ns, rep: Report):
    from .selfcheck import run_all

    results = run_all(cfg.seed)
    rep.put("checks", [r.to_json() for r in results])
    for r in results:
        rep.say(f"{'PASS' if r.ok else 'FAIL'}  {r.name}: {r.detail}")
    if not all(r.ok for r in results):
        rep.fail()


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank", type=int)
    common.add_argument("--max-len", type=int)
    common.add_argument("--cand-len", type=int, default=2)
    common.add_argument("--budget", type=int, default=whitehead.DEFAULT_BUDGET)
    common.add_argument("--workers", type=int, help="default: $FOXPRIM_WORKERS or 1")
    common.add_argument("--json", action="store_true")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--checkpoint", help="write progress here")
    common.add_argument("--resume", help="resume from (and keep updating) this checkpoint")
    common.add_argument("--out", help="write the search report JSON here")

    p = argparse.ArgumentParser(prog="foxprim",
                                description="Fox calculus and primitivity toolkit for free groups")
    p.add_argument("--version", action="version", version=f"foxprim {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("word", parents=[common], help="normal form and cyclic reduction")
    s.add_argument("word")
    s.set_defaults(func=cmd_word)

    s = sub.add_parser("fox", parents=[common], help="Fox derivatives and matrices")
    s.add_argument("op", choices=["left", "right", "jacobian", "djac", "linmat", "chain"])
    s.add_argument("arg", help="word, or map for jacobian/chain")
    s.add_argument("extra", nargs="?", help="generator index (left/right) or word (chain)")
    s.set_defaults(func=cmd_fox)

    s = sub.add_parser("map", parents=[common], help="apply or compose endomorphisms")
    s.add_argument("op", choices=["apply", "compose"])
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_map)

    for name, fn in (("aut", cmd_aut), ("mono", cmd_mono)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("op", choices=["check"])
        s.add_argument("map")
        s.set_defaults(func=fn)

    s = sub.add_parser("orbit", parents=[common], help="Whitehead orbit tools")
    s.add_argument("op", choices=["min", "same", "witness"])
    s.add_argument("first")
    s.add_argument("second", nargs="?")
    s.set_defaults(func=cmd_orbit)

    s = sub.add_parser("prim", parents=[common], help="primitivity and blocking words")
    s.add_argument("op", choices=["check", "enum", "block", "block-search"])
    s.add_argument("word", nargs="?")
    s.add_argument("--list", action="store_true", help="print the enumerated words")
    s.set_defaults(func=cmd_prim)

    s = sub.add_parser("delta", parents=[common], help="Delta-primitivity")
    s.add_argument("op", choices=["m2", "necessary", "certify", "transport", "odd", "f2"])
    s.add_argument("word")
    s.add_argument("--inverse", help="JSON matrix file (array of arrays of ring text)")
    s.add_argument("--map", help="automorphism to transport a certificate along")
    s.set_defaults(func=cmd_delta)

    s = sub.add_parser("verify-paper", parents=[common], help="run the golden example suite")
    s.set_defaults(func=cmd_verify)
    return p


def dispatch(argv=None) -> tuple[int, Report | None]:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return (e.code if isinstance(e.code, int) else 2), None
    try:
        cfg = RunConfig.from_args(ns)
        if ns.command == "prim" and ns.op in ("check", "block") and ns.word is None:
            raise UsageError(f"prim {ns.op} needs a word")
        rep = Report(cfg, ns.command)
        ns.func(cfg, ns, rep)
    except (UsageError, ParseError, RankError, CheckpointError) as e:
        print(f"foxprim: error: {e}", file=sys.stderr)
        return 2, None
    except ValueError as e:
        # domain precondition failures (e.g. word not in the derived subgroup)
        print(f"foxprim: error: {e}", file=sys.stderr)
        return 2, None
    rep.emit()
    return rep.status, rep


def main(argv=None) -> int:
    status, _ = dispatch(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
