#!/usr/bin/env python3
"""Survey every built-in grammar: roles, verdict, and a language sample.

Usage:
    python scripts/corpus_survey.py [--max-len N] [--max-form-len N] [--max-steps N]

Produces one block per grammar with its non-terminal role table, the
bounded-language verdict, trace-index ranges over the enumeration witnesses,
and the first few strings of the bounded language.
"""

import argparse

from fgw.classify import classify_all
from fgw.corpus import CORPUS_IDS, DESCRIPTIONS, load_corpus
from fgw.engine import SearchLimits, enumerate_language
from fgw.grammar import compact_tokens


def survey(cid: str, lim: SearchLimits, sample: int) -> None:
    g = load_corpus(cid)
    report = classify_all(g, lim)
    print(f"== {cid}: {DESCRIPTIONS[cid]}")
    print(f"   verdict: {report.verdict.kind.value}")
    for sym, flags in report.roles.items():
        print(f"   {sym.name}: {', '.join(flags.names())}")
    s = report.index_summary
    if s is None:
        print("   indices: no complete derivations within limits")
    else:
        print(f"   indices over {s.derivations} derivations: "
              f"PI {s.pi[0]}..{s.pi[1]}  CI {s.ci[0]}..{s.ci[1]}  TI {s.ti[0]}..{s.ti[1]}")
    lang = enumerate_language(g, lim)
    ordered = sorted(lang.strings, key=lambda k: (len(k), k))
    shown = "  ".join(compact_tokens(k) for k in ordered[:sample])
    suffix = "" if len(ordered) <= sample else f"  … ({len(ordered)} total)"
    state = "pruned" if lang.pruned else "complete"
    print(f"   language ({state} closure): {shown}{suffix}")
    print()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-len", type=int, default=4, help="string length cap (default 4)")
    ap.add_argument("--max-form-len", type=int, default=10, help="form length cap (default 10)")
    ap.add_argument("--max-steps", type=int, default=24, help="derivation step cap (default 24)")
    ap.add_argument("--sample", type=int, default=8, help="strings to print per grammar")
    args = ap.parse_args()
    lim = SearchLimits(
        max_steps=args.max_steps, max_form_len=args.max_form_len, max_string_len=args.max_len
    )
    for cid in CORPUS_IDS:
        survey(cid, lim, args.sample)


if __name__ == "__main__":
    main()
