"""Step counts of the PMT divisibility search on random frames.

For two parameters the search is compared with the exhaustive shortest path.
"""

import argparse
import json
import random
import statistics
from dataclasses import asdict, dataclass

from valinv.blowup import Frame, make_divisible, monomial_value
from valinv.errors import NotFound
from valinv.oracle import pmt_bfs


@dataclass
class DivisibilityConfig:
    instances: int = 300
    max_rank: int = 3
    exponent_sum: int = 10
    column_moves: int = 6
    bfs_depth: int = 8
    seed: int = 0


def random_frame(rng: random.Random, n: int, moves: int) -> Frame:
    while True:
        cols = [[int(i == j) for i in range(n)] for j in range(n)]
        rng.shuffle(cols)
        for _ in range(rng.randint(0, moves) if n > 1 else 0):
            i, j = rng.sample(range(n), 2)
            c = rng.randint(-3, 3)
            cols[j] = [a + c * b for a, b in zip(cols[j], cols[i])]
        try:
            return Frame(tuple(tuple(c) for c in cols))
        except ValueError:
            continue


def random_monomial(rng: random.Random, n: int, total: int) -> tuple:
    exps = [0] * n
    for _ in range(rng.randint(0, total)):
        exps[rng.randrange(n)] += 1
    return tuple(exps)


def run(cfg: DivisibilityConfig) -> dict:
    rng = random.Random(cfg.seed)
    lengths: dict[int, list[int]] = {}
    bfs_agree = bfs_total = 0
    for _ in range(cfg.instances):
        n = rng.randint(1, cfg.max_rank)
        frame = random_frame(rng, n, cfg.column_moves)
        a = random_monomial(rng, n, cfg.exponent_sum)
        b = random_monomial(rng, n, cfg.exponent_sum)
        if monomial_value(frame, a) > monomial_value(frame, b):
            a, b = b, a
        steps = len(make_divisible(frame, a, b).steps)
        lengths.setdefault(n, []).append(steps)
        if n == 2:
            bfs_total += 1
            try:
                shortest = len(pmt_bfs(frame, a, b, cfg.bfs_depth))
            except NotFound:
                shortest = None
            bfs_agree += (shortest == steps) or (shortest is None and steps > cfg.bfs_depth)
    return {
        "config": asdict(cfg),
        "steps_by_rank": {
            str(n): {"count": len(v), "mean": round(statistics.mean(v), 2), "max": max(v)}
            for n, v in sorted(lengths.items())
        },
        "rank2_matches_shortest": f"{bfs_agree}/{bfs_total}",
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in asdict(DivisibilityConfig()).items():
        parser.add_argument("--" + name.replace("_", "-"), type=type(value), default=value)
    print(json.dumps(run(DivisibilityConfig(**vars(parser.parse_args()))), indent=2))


if __name__ == "__main__":
    main()
