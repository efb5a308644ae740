"""Beam parsing of recognizer-sized synthetic lattices.

Usage: python3 benchmarks/synthetic_lattices.py [--beam 0.3] [--lattices 10] [--seed 5]
"""

import argparse
import statistics

from glrlattice.workload import build_workload, run_benchmark


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--beam", type=float, nargs="+", default=[0.3, 1.0])
    ap.add_argument("--lattices", type=int, default=10)
    ap.add_argument("--rules", type=int, default=220)
    ap.add_argument("--seed", type=int, default=5)
    args = ap.parse_args()

    wl = build_workload(seed=args.seed, n_rules=args.rules, n_lattices=args.lattices)
    print(f"grammar: {len(wl.grammar.rules)} rules, {wl.table.report()}")
    print(f"bigram perplexity on held-out sentences: {wl.perplexity:.1f}")
    for width in args.beam:
        rows = run_benchmark(wl, width)
        print(f"\nbeam {width}")
        print(" hyps words accepted spoken  seconds  actions  pruned recovered")
        for r in rows:
            print(
                f"{r.hypotheses:5d} {r.words:5d} {str(r.accepted):>8} {str(r.correct):>6} "
                f"{r.seconds:8.3f} {r.actions:8d} {r.pruned:7d} {r.recovered:9d}"
            )
        secs = [r.seconds for r in rows]
        print(
            f"accepted {sum(r.accepted for r in rows)}/{len(rows)}, "
            f"spoken words best {sum(r.correct for r in rows)}/{len(rows)}, "
            f"mean {statistics.mean(secs):.2f}s, max {max(secs):.2f}s"
        )


if __name__ == "__main__":
    main()
