#!/usr/bin/env python3
"""How stable are buffer-discipline verdicts as the trace sample grows?

Usage:
    python scripts/discipline_survey.py [--grammars G2 STACK DEQUE] [--max-seeds N]

For each grammar, classifies the P..Q buffer discipline over increasing
numbers of seeded random complete derivations and prints the verdict,
operation histogram, and end sets at each sample size.  A verdict that
changes while the sample grows means the smaller sample missed an operation
kind, never that an earlier step was re-read.
"""

import argparse

from fgw.corpus import load_corpus
from fgw.structure import classify_discipline, seeded_traces


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grammars", nargs="+", default=["G2", "STACK", "DEQUE", "PRIORITY"],
                    help="corpus ids to survey (need P and Q delimiters)")
    ap.add_argument("--max-seeds", type=int, default=200, help="largest sample size")
    ap.add_argument("--base-seed", type=int, default=0)
    args = ap.parse_args()

    sizes = [n for n in (5, 10, 25, 50, 100, 200, 400) if n <= args.max_seeds]
    for cid in args.grammars:
        g = load_corpus(cid)
        left, right = g.symbol("P"), g.symbol("Q")
        print(f"== {cid}")
        traces = seeded_traces(g, args.max_seeds, base_seed=args.base_seed)
        print(f"   complete walks: {len(traces)}/{args.max_seeds}")
        for n in sizes:
            batch = traces[:n]
            if not batch:
                print(f"   n={n:<4d} (no complete traces)")
                continue
            v = classify_discipline(g, left, right, batch)
            hist = "  ".join(f"{op.value}×{k}" for op, k in sorted(
                v.op_histogram.items(), key=lambda kv: kv[0].value))
            ins = ",".join(sorted(e.value for e in v.insert_ends)) or "-"
            dele = ",".join(sorted(e.value for e in v.delete_ends)) or "-"
            print(f"   n={len(batch):<4d} {v.verdict.value:<6s} "
                  f"ins[{ins}] del[{dele}]  {hist}")
        print()


if __name__ == "__main__":
    main()
