#!/usr/bin/env python3
"""Growth of the parenthesis PDA's configuration language with input length.

Usage:
    python scripts/pda_configs.py [--max-len N] [--spec FILE]

Feeds every balanced-parenthesis word up to each length bound into the PDA
and prints the accumulated set of stack configurations.  For the built-in
automaton the set is always a prefix-closed block of '(' stacks whose height
tracks the deepest nesting seen so far.
"""

import argparse
from pathlib import Path

from fgw.corpus import load_corpus
from fgw.engine import SearchLimits, enumerate_language
from fgw.pda import PARENS_PDA, config_language, parse_pda, render_stack


def balanced_words(max_len: int) -> list[tuple[str, ...]]:
    lang = enumerate_language(
        load_corpus("PARENS"),
        SearchLimits(max_steps=max(6 * max_len, 2), max_form_len=2 * max_len + 2,
                     max_string_len=max(max_len, 1)),
    )
    return [tuple(k) for k in sorted(lang.strings, key=lambda k: (len(k), k))]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-len", type=int, default=10, help="longest input words (default 10)")
    ap.add_argument("--spec", metavar="FILE", help="alternative .pda file to run")
    args = ap.parse_args()
    spec = PARENS_PDA if not args.spec else parse_pda(
        Path(args.spec).read_text(encoding="utf-8"))

    for bound in range(0, args.max_len + 1, 2):
        inputs = [w for w in balanced_words(bound)]
        lang = config_language(spec, inputs)
        configs = sorted(lang.configs, key=lambda c: (len(c), c))
        rendered = " ".join(render_stack(c) for c in configs)
        note = f"  ({len(lang.inconclusive_inputs)} inconclusive)" if lang.inconclusive_inputs else ""
        print(f"inputs <= {bound:2d} ({len(inputs):3d} words): "
              f"{len(configs)} configs: {rendered}{note}")


if __name__ == "__main__":
    main()
