"""Search for primitivity-blocking words in F_n (n >= 3), with checkpointing.

Survivors are candidates with no primitive extension up to --max-len; they are
evidence only. Interrupt at any time and rerun with --resume.

    python3 scripts/block_search.py --rank 3 --cand-len 4 --max-len 10 \
        --checkpoint run.ckpt --out report.json
"""
import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from foxprim import __version__
from foxprim.checkpoint import Checkpoint, CheckpointWriter
from foxprim.primitivity import blocking_search, default_candidates


@dataclass
class Config:
    rank: int = 3
    cand_len: int = 4
    max_len: int = 10
    workers: int = 1
    checkpoint: str | None = None
    resume: bool = False
    out: str | None = None


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f, d in asdict(Config()).items():
        flag = "--" + f.replace("_", "-")
        if isinstance(d, bool):
            p.add_argument(flag, action="store_true")
        else:
            p.add_argument(flag, type=type(d) if d is not None else str, default=d)
    cfg = Config(**vars(p.parse_args(argv)))

    params = {"cand_len": cfg.cand_len, "max_len": cfg.max_len}
    ck, done = Checkpoint(cfg.rank, params), {}
    if cfg.resume:
        if not cfg.checkpoint or not Path(cfg.checkpoint).exists():
            p.error("--resume needs an existing --checkpoint")
        ck = Checkpoint.load(cfg.checkpoint, rank=cfg.rank, params=params)
        done = ck.done()
    sink = CheckpointWriter(cfg.checkpoint, ck, every=8) if cfg.checkpoint else None

    cands = default_candidates(cfg.rank, cfg.cand_len)
    print(f"{len(cands)} candidates up to symmetry, {len(done)} already done", file=sys.stderr)
    t0 = time.perf_counter()
    res = blocking_search(cfg.rank, cfg.max_len, candidates=cands, sink=sink,
                          workers=cfg.workers, done=done)
    if sink:
        sink.flush()
    dt = time.perf_counter() - t0

    counts = {}
    for r in res["results"]:
        counts[r["verdict"]] = counts.get(r["verdict"], 0) + 1
    print(f"verdicts {counts} in {dt:.1f}s")
    print("survivors:", " ".join(res["survivors"]) or "none")
    if cfg.out:
        report = {"version": __version__, "config": asdict(cfg), **res}
        Path(cfg.out).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
