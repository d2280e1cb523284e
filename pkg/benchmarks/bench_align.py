"""Time the compiled alignment kernel against the pure-Python one.

    python benchmarks/bench_align.py --pairs 200 --length 120
"""

import argparse
import random
import sys
import timeit

from itnforge import _align_py

try:
    from itnforge import _calign
except ImportError:
    _calign = None


def make_pairs(n, length, vocab, seed):
    rng = random.Random(seed)
    pairs = []
    for _ in range(n):
        a = [rng.randrange(vocab) for _ in range(rng.randint(length // 2, length))]
        b = [x if rng.random() < 0.8 else rng.randrange(vocab) for x in a]
        cut = rng.randrange(len(b))
        del b[cut:cut + rng.randint(0, 3)]
        pairs.append((a, b))
    return pairs


def bench(kernel, pairs, repeat):
    def run():
        for a, b in pairs:
            kernel.edit_ops(a, b)
    return min(timeit.repeat(run, number=1, repeat=repeat))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--pairs", type=int, default=200)
    p.add_argument("--length", type=int, default=120)
    p.add_argument("--vocab", type=int, default=50)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    pairs = make_pairs(args.pairs, args.length, args.vocab, args.seed)
    py = bench(_align_py, pairs, args.repeat)
    print(f"pure python : {py * 1e3:9.1f} ms for {len(pairs)} pairs (max length {args.length})")
    if _calign is None:
        print("compiled    : not built (run `pip install -e . --no-build-isolation` with Cython present)")
        return 0
    for a, b in pairs:
        if _calign.edit_ops(a, b) != _align_py.edit_ops(a, b):
            print("MISMATCH between kernels", file=sys.stderr)
            return 1
    c = bench(_calign, pairs, args.repeat)
    print(f"compiled    : {c * 1e3:9.1f} ms  ({py / c:.1f}x faster, identical paths)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
