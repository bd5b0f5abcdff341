"""Compare the closed-form initial index with the brute-force count on random subgroups.

Also tabulates how often epsilon reaches the index, per rank.
"""

import argparse
import json
import random
import time
from collections import Counter
from dataclasses import asdict, dataclass

from valinv.errors import NotFiniteIndex
from valinv.lattice import canonicalize, group_index, initial_index, semigroup_cover
from valinv.oracle import brute_cover_verify, stable_brute_epsilon


@dataclass
class SweepConfig:
    samples: int = 500
    max_rank: int = 4
    entry_bound: int = 6
    extra_generators: int = 2
    verify_covers: bool = True
    seed: int = 0


def sample(rng: random.Random, cfg: SweepConfig):
    n = rng.randint(1, cfg.max_rank)
    while True:
        m = rng.randint(n, n + cfg.extra_generators)
        gens = [tuple(rng.randint(-cfg.entry_bound, cfg.entry_bound) for _ in range(n))
                for _ in range(m)]
        try:
            return canonicalize(gens)
        except NotFiniteIndex:
            continue


def run(cfg: SweepConfig) -> dict:
    rng = random.Random(cfg.seed)
    per_rank: dict[int, Counter] = {}
    mismatches = []
    start = time.perf_counter()
    for _ in range(cfg.samples):
        delta = sample(rng, cfg)
        eps, idx = initial_index(delta), group_index(delta)
        stats = per_rank.setdefault(delta.n, Counter())
        stats["total"] += 1
        stats["equal"] += eps == idx
        if stable_brute_epsilon(delta) != eps:
            mismatches.append([list(g) for g in delta.gens])
        cover = semigroup_cover(delta)
        if cfg.verify_covers and cover is not None:
            stats["covers_ok"] += bool(brute_cover_verify(delta, cover.representatives))
    return {
        "config": asdict(cfg),
        "seconds": round(time.perf_counter() - start, 2),
        "mismatches": mismatches,
        "by_rank": {str(n): dict(c) for n, c in sorted(per_rank.items())},
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in asdict(SweepConfig()).items():
        flag = "--" + name.replace("_", "-")
        if isinstance(value, bool):
            parser.add_argument(flag, action=argparse.BooleanOptionalAction, default=value)
        else:
            parser.add_argument(flag, type=type(value), default=value)
    cfg = SweepConfig(**vars(parser.parse_args()))
    print(json.dumps(run(cfg), indent=2))


if __name__ == "__main__":
    main()
