"""Run the golden-example suite and write a JSON summary.

    python3 scripts/verify_goldens.py --seed 0 --out goldens.json
"""
import argparse
import json
import sys
from dataclasses import asdict, dataclass

from foxprim import __version__
from foxprim.selfcheck import run_all


@dataclass
class Config:
    seed: int = 0
    out: str | None = None


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    cfg = Config(**vars(p.parse_args(argv)))
    results = run_all(cfg.seed)
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'}  {r.name}  ({r.seconds:.2f}s)  {r.detail}")
    if cfg.out:
        with open(cfg.out, "w") as f:
            json.dump({"version": __version__, "config": asdict(cfg),
                       "checks": [r.to_json() for r in results]}, f, indent=2)
    return 0 if all(r.ok for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
