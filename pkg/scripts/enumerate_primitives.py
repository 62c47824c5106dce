"""Count cyclically reduced primitive elements of F_2 by length and check
the CMZ syllable condition and the two certified blocking prefixes on each.

    python3 scripts/enumerate_primitives.py --max-len 14
"""
import argparse
import sys
import time
from dataclasses import dataclass

from foxprim.primitivity import cmz_necessary_condition, enumerate_primitives_f2
from foxprim.words import apply_letter_map, is_prefix_no_cancellation, parse, signed_permutations, Word


@dataclass
class Config:
    max_len: int = 14
    method: str = "orbit"  # or "filter" (brute force, slow past ~10)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-len", type=int, default=14)
    p.add_argument("--method", choices=["orbit", "filter"], default="orbit")
    cfg = Config(**vars(p.parse_args(argv)))

    prefixes = {apply_letter_map(parse(s, 2).letters, m)
                for s in ("abAB", "aabb") for m in signed_permutations(2)}
    prefixes = [Word(u, 2) for u in sorted(prefixes)]
    t0 = time.perf_counter()
    by_len: dict[int, int] = {}
    bad_cmz, blocked = [], []
    for w in enumerate_primitives_f2(cfg.max_len, cfg.method):
        by_len[len(w)] = by_len.get(len(w), 0) + 1
        if not cmz_necessary_condition(w):
            bad_cmz.append(str(w))
        if any(is_prefix_no_cancellation(g, w) for g in prefixes):
            blocked.append(str(w))
    total = 0
    print("len  count  cumulative")
    for k in sorted(by_len):
        total += by_len[k]
        print(f"{k:3d}  {by_len[k]:5d}  {total:10d}")
    print(f"CMZ failures: {len(bad_cmz)}; words with a blocked prefix: {len(blocked)}; "
          f"{time.perf_counter() - t0:.1f}s")
    return 0 if not bad_cmz and not blocked else 1


if __name__ == "__main__":
    sys.exit(main())
