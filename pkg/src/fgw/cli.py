"""Command-line front end: every operation as a subcommand, plus an
interactive REPL for stepping derivations by hand.

Exit codes tell the outcome apart from mere success of the process:
0 success / target found / input accepted; 1 usage error; 2 parse,
validation, or replay error; 3 inconclusive (search pruned, run hit a step
limit, no verdict possible); 4 definitive negative (exhaustive search found
nothing, input rejected, requested property violated).

All JSON goes to standard output; diagnostics go to standard error.  Set
FGW_COLOR=0 to disable ANSI styling (styling is also off when the stream is
not a terminal).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from random import Random
from typing import Sequence, TextIO

from .classify import Verdict, classify_all, normalize_cs_pnt, report_to_json
from .corpus import CORPUS_IDS, DESCRIPTIONS, corpus_source, load_corpus
from .engine import (
    DerivationStep,
    DerivationTrace,
    RewriteError,
    SearchLimits,
    SearchStatus,
    apply_at,
    bfs_derive,
    constrained_derive,
    enumerate_language,
    find_matches,
    render_trace,
    successors,
    trace_from_json,
    trace_indices,
    trace_to_json,
)
from .grammar import (
    Grammar,
    GrammarError,
    compact_tokens,
    parse_form,
    parse_grammar,
    render_form,
    serialize_grammar,
)
from .pda import PARENS_PDA, PdaError, parse_pda, pda_run, render_stack, run_to_json
from .structure import (
    AnalysisError,
    BufferOp,
    analysis_to_json,
    check_priority_discipline,
    classify_buffer_ops,
    classify_discipline,
    find_priority_witness,
    seeded_traces,
)

BUILTIN_PDAS = {"parens": PARENS_PDA}


def _styled(text: str, code: str) -> str:
    if os.environ.get("FGW_COLOR") == "0" or not sys.stdout.isatty():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=False))


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage problems; this tool reserves 2 for
    parse/validation errors and uses 1 for usage."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_grammar(args) -> Grammar:
    if args.corpus:
        return load_corpus(args.corpus)
    return parse_grammar(Path(args.grammar).read_text(encoding="utf-8"))


def _limits(args) -> SearchLimits:
    try:
        return SearchLimits(args.max_steps, args.max_form_len, args.max_visited, args.max_len)
    except ValueError as exc:
        args.parser.error(str(exc))
        raise AssertionError  # unreachable; error() exits


# ---------------------------------------------------------------- commands


def cmd_validate(args) -> int:
    try:
        g = _load_grammar(args)
    except GrammarError as exc:
        if args.json:
            _emit_json({"ok": False, "errors": str(exc).splitlines()})
        print(f"fgw: {exc}", file=sys.stderr)
        return 2
    if args.json:
        _emit_json({
            "ok": True,
            "name": g.name,
            "start": g.start.name,
            "terminals": sorted(s.name for s in g.terminals),
            "nonterminals": sorted(s.name for s in g.nonterminals),
            "productions": len(g.productions),
        })
    else:
        print(
            f"ok: {g.name}: {len(g.terminals)} terminals, "
            f"{len(g.nonterminals)} non-terminals, {len(g.productions)} productions"
        )
    return 0


def cmd_enumerate(args) -> int:
    g = _load_grammar(args)
    lang = enumerate_language(g, _limits(args))
    ordered = sorted(lang.strings, key=lambda key: (len(key), key))
    if args.json:
        _emit_json({"strings": ["".join(k) if all(len(t) == 1 for t in k) else " ".join(k)
                                for k in ordered],
                    "pruned": lang.pruned})
    else:
        for key in ordered:
            print(compact_tokens(key))
        state = "pruned" if lang.pruned else "complete"
        print(f"{len(ordered)} strings; closure {state}", file=sys.stderr)
    return 0


def cmd_derive(args) -> int:
    g = _load_grammar(args)
    lim = _limits(args)
    target = parse_form(g, args.target)
    if args.inject:
        name, sep, text = args.inject.partition(":")
        if not sep:
            args.parser.error("--inject wants NONTERMINAL:STRING, e.g. N:aabba")
        injector = g.symbol(name.strip())
        order = parse_form(g, text.strip())
        outcome = constrained_derive(g, injector, order, target, lim)
    else:
        outcome = bfs_derive(g, target, lim)

    if args.json:
        _emit_json({
            "status": outcome.status.value,
            "trace": trace_to_json(outcome.trace) if outcome.trace else None,
        })
    elif outcome.found:
        print(render_trace(g, outcome.trace))
        print(_styled(f"Found ({len(outcome.trace.steps)} steps)", "1;32"))
    elif outcome.status is SearchStatus.EXHAUSTED_PRUNED:
        print(_styled("ExhaustedPruned: not found; parts of the closure were cut off", "1;33"))
    else:
        print(_styled("ExhaustedComplete: unreachable anywhere within the limits", "1;31"))

    if outcome.found:
        return 0
    return 3 if outcome.status is SearchStatus.EXHAUSTED_PRUNED else 4


def _print_report_text(report) -> None:
    print(f"verdict: {report.verdict.kind.value}")
    for sym, flags in report.roles.items():
        ev = report.evidence.get(sym)
        parts = []
        for flag in flags.names():
            chain = getattr(ev, flag, None) if ev else None
            parts.append(f"{flag}(rules {','.join(map(str, chain))})" if chain else flag)
        print(f"  {sym.name}: {' '.join(parts)}")
    s = report.index_summary
    if s is None:
        print("indices: no complete derivations within limits")
    else:
        print(
            f"indices over {s.derivations} derivations: "
            f"PI {s.pi[0]}..{s.pi[1]}, CI {s.ci[0]}..{s.ci[1]}, TI {s.ti[0]}..{s.ti[1]}"
        )


def cmd_classify(args) -> int:
    g = _load_grammar(args)
    lim = _limits(args)
    report = classify_all(g, lim)
    if args.normalize:
        normalized = normalize_cs_pnt(g)
        n_report = classify_all(normalized, lim)
        if args.json:
            _emit_json({
                "original": report_to_json(report),
                "normalized": report_to_json(n_report),
                "normalized_source": serialize_grammar(normalized),
            })
        else:
            _print_report_text(report)
            print("--- normalized ---")
            print(serialize_grammar(normalized), end="")
            _print_report_text(n_report)
    elif args.json:
        _emit_json(report_to_json(report))
    else:
        _print_report_text(report)
    return 3 if report.verdict.kind is Verdict.INCONCLUSIVE else 0


def cmd_analyze(args) -> int:
    g = _load_grammar(args)
    left, right = g.symbol(args.left), g.symbol(args.right)
    traces = seeded_traces(g, count=args.seeds, base_seed=args.seed)
    if not traces:
        print(f"fgw: no complete derivations found in {args.seeds} seeded walks", file=sys.stderr)
        return 3
    verdict = classify_discipline(g, left, right, traces)

    violations = []
    witness = None
    priority = None
    if args.priority:
        priority = [g.symbol(n.strip()) for n in args.priority.split(">") if n.strip()]
        if not priority:
            args.parser.error("--priority wants names like 'B>A'")
        for i, t in enumerate(traces):
            report = check_priority_discipline(t, left, right, priority)
            violations.extend((i, v) for v in report.violations)
        witness = find_priority_witness(
            g, left, right, priority, require_reorder=args.require_reorder
        )

    if args.json:
        payload = analysis_to_json(verdict, violations)
        payload["traces"] = len(traces)
        if args.priority:
            payload["witness_seed"] = None if witness is None else witness[0]
        _emit_json(payload)
    else:
        print(f"verdict: {verdict.verdict.value}  (over {len(traces)} seeded traces)")
        print(f"insert ends: {', '.join(sorted(e.value for e in verdict.insert_ends)) or '-'}")
        print(f"delete ends: {', '.join(sorted(e.value for e in verdict.delete_ends)) or '-'}")
        ops = "  ".join(
            f"{op.value}×{n}" for op, n in sorted(
                verdict.op_histogram.items(), key=lambda kv: kv[0].value
            )
        )
        print(f"ops: {ops}")
        if args.priority:
            order = ">".join(s.name for s in priority)
            clean = sum(
                1 for i in range(len(traces)) if not any(ti == i for ti, _ in violations)
            )
            print(f"priority {order}: {clean}/{len(traces)} sampled traces respect it")
            if witness is None:
                print(_styled("witness: none found", "1;31"))
            else:
                seed, trace = witness
                reorders = sum(
                    1 for s in classify_buffer_ops(g, trace, left, right)
                    if s.op is BufferOp.REORDER
                )
                print(f"witness: seed {seed}, {len(trace.steps)} steps, "
                      f"{reorders} reorders, priority-respecting")
    if args.priority and witness is None:
        return 4
    return 0


def cmd_indices(args) -> int:
    g = _load_grammar(args)
    try:
        data = json.loads(Path(args.trace).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        print(f"fgw: {args.trace}: {exc}", file=sys.stderr)
        return 2
    ix = trace_indices(g, trace_from_json(g, data))
    if args.json:
        _emit_json({"pi": ix.production_index, "ci": ix.consumption_index,
                    "ti": ix.transient_index})
    else:
        print(f"PI={ix.production_index} CI={ix.consumption_index} TI={ix.transient_index}")
    return 0


def _pda_tokens(spec, text: str) -> tuple[str, ...]:
    text = text.strip()
    if not text or text in ("eps", "ε"):
        return ()
    if any(ch.isspace() for ch in text):
        return tuple(text.split())
    if all(len(t) == 1 for t in spec.input_alphabet):
        return tuple(text)
    return (text,)


def cmd_pda(args) -> int:
    if args.builtin:
        spec = BUILTIN_PDAS[args.builtin]
    else:
        spec = parse_pda(Path(args.spec).read_text(encoding="utf-8"))
    inputs = [_pda_tokens(spec, s) for s in args.input or []]
    if args.inputs:
        for raw in Path(args.inputs).read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if line and not line.startswith("#"):
                inputs.append(_pda_tokens(spec, line))
    if not inputs:
        args.parser.error("no inputs: use --input STRING (repeatable) or --inputs FILE")

    results = [pda_run(spec, tokens, args.step_limit) for tokens in inputs]
    union = sorted(
        {c for r in results for c in r.configs}, key=lambda c: (len(c), c)
    )
    if args.json:
        if len(results) == 1:
            _emit_json(run_to_json(results[0]))
        else:
            _emit_json({
                "runs": [
                    {"input": compact_tokens(i) if i else "", **run_to_json(r)}
                    for i, r in zip(inputs, results)
                ],
                "configs": ["" if not c else render_stack(c) for c in union],
            })
    else:
        for tokens, r in zip(inputs, results):
            word = compact_tokens(tokens)
            status = ("inconclusive" if r.inconclusive
                      else "accepted" if r.accepted else "rejected")
            configs = " ".join(render_stack(c) for c in sorted(r.configs, key=lambda c: (len(c), c)))
            print(f"{word}: {status}  configs: {configs}")
        print(f"configuration language: {' '.join(render_stack(c) for c in union)}")
    if any(r.inconclusive for r in results):
        return 3
    if not all(r.accepted for r in results):
        return 4
    return 0


def cmd_corpus(args) -> int:
    if args.action == "list":
        if args.json:
            _emit_json([{"id": i, "description": DESCRIPTIONS[i]} for i in CORPUS_IDS])
        else:
            width = max(map(len, CORPUS_IDS))
            for i in CORPUS_IDS:
                print(f"{i:<{width}}  {DESCRIPTIONS[i]}")
        return 0
    if not args.id:
        args.parser.error("corpus show wants a grammar id")
    source = corpus_source(args.id)
    if args.json:
        _emit_json({"id": args.id, "source": source})
    else:
        print(source, end="")
    return 0


# -------------------------------------------------------------------- REPL


class ReplError(Exception):
    """A REPL command that cannot run; the session state is left unchanged."""


class ReplSession:
    """Derivation state for the `step` command.

    Invariant: replaying ``steps`` from the start symbol reproduces ``form``;
    every command either preserves the pair or fails without touching it.
    """

    def __init__(self, g: Grammar, seed: int = 0):
        self.grammar = g
        self.form = (g.start,)
        self.steps: list[DerivationStep] = []
        self.rng = Random(seed)

    def trace(self) -> DerivationTrace:
        return DerivationTrace(self.grammar.name, (self.grammar.start,), tuple(self.steps))

    def matches(self):
        return find_matches(self.grammar, self.form)

    def apply(self, k: int) -> None:
        """Apply match number k (1-based, as printed by `matches`)."""
        ms = self.matches()
        if not 1 <= k <= len(ms):
            raise ReplError(f"no match numbered {k} (there are {len(ms)})")
        m = ms[k - 1]
        self.form = apply_at(self.form, self.grammar, m)
        self.steps.append(DerivationStep(m.production_index, m.position, self.form))

    def undo(self) -> None:
        if not self.steps:
            raise ReplError("nothing to undo")
        self.steps.pop()
        self.form = self.steps[-1].form_after if self.steps else (self.grammar.start,)

    def reset(self) -> None:
        self.form = (self.grammar.start,)
        self.steps.clear()

    def random_steps(self, n: int) -> int:
        """Apply n uniformly chosen steps; returns how many actually ran."""
        done = 0
        for _ in range(n):
            ms = self.matches()
            if not ms:
                break
            m = self.rng.choice(ms)
            self.form = apply_at(self.form, self.grammar, m)
            self.steps.append(DerivationStep(m.production_index, m.position, self.form))
            done += 1
        return done

    def indices(self):
        return trace_indices(self.grammar, self.trace())


_REPL_HELP = "commands: show, matches, apply K, undo, reset, random N, indices, quit"


def _repl_dispatch(sess: ReplSession, line: str, out: TextIO) -> bool:
    """Run one REPL command; returns False when the session should end."""
    words = line.split()
    if not words:
        return True
    cmd, rest = words[0], words[1:]
    if cmd in ("quit", "exit"):
        return False
    if cmd == "show":
        print(render_form(sess.form), file=out)
    elif cmd == "matches":
        succ = successors(sess.grammar, sess.form)
        if not succ:
            print("no matches", file=out)
        for i, (m, f) in enumerate(succ, start=1):
            p = sess.grammar.productions[m.production_index]
            print(f"{i}) [{p.index}] {p} @ {m.position}  ->  {render_form(f)}", file=out)
    elif cmd == "apply":
        if len(rest) != 1 or not rest[0].isdigit():
            raise ReplError("usage: apply K")
        sess.apply(int(rest[0]))
        print(render_form(sess.form), file=out)
    elif cmd == "undo":
        sess.undo()
        print(render_form(sess.form), file=out)
    elif cmd == "reset":
        sess.reset()
        print(render_form(sess.form), file=out)
    elif cmd == "random":
        if len(rest) > 1 or (rest and not rest[0].isdigit()):
            raise ReplError("usage: random N")
        n = int(rest[0]) if rest else 1
        done = sess.random_steps(n)
        print(f"applied {done} of {n}", file=out)
        print(render_form(sess.form), file=out)
    elif cmd == "indices":
        ix = sess.indices()
        print(f"PI={ix.production_index} CI={ix.consumption_index} "
              f"TI={ix.transient_index}", file=out)
    elif cmd == "help":
        print(_REPL_HELP, file=out)
    else:
        raise ReplError(f"unknown command {cmd!r}; {_REPL_HELP}")
    return True


def repl(g: Grammar, *, seed: int = 0, stream: TextIO | None = None,
         out: TextIO | None = None) -> ReplSession:
    """Interactive derivation stepping; reads commands line by line."""
    stream = stream if stream is not None else sys.stdin
    out = out if out is not None else sys.stdout
    sess = ReplSession(g, seed)
    interactive = hasattr(stream, "isatty") and stream.isatty()
    if interactive:
        print(f"{g.name}: {_REPL_HELP}", file=out)
    while True:
        if interactive:
            out.write("fgw> ")
            out.flush()
        line = stream.readline()
        if not line:
            break
        try:
            if not _repl_dispatch(sess, line.strip(), out):
                break
        except ReplError as exc:
            print(f"error: {exc}", file=out)
    return sess


def cmd_step(args) -> int:
    repl(_load_grammar(args), seed=args.seed)
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fgw", description="Workbench for unrestricted rewriting grammars.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    source = argparse.ArgumentParser(add_help=False)
    src = source.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", choices=CORPUS_IDS, metavar="ID",
                     help="built-in grammar (see `fgw corpus list`)")
    src.add_argument("--grammar", metavar="FILE", help=".grm file to load")

    limits = argparse.ArgumentParser(add_help=False)
    limits.add_argument("--max-steps", type=int, default=64, metavar="N",
                        help="derivation length cap (default 64)")
    limits.add_argument("--max-form-len", type=int, default=24, metavar="N",
                        help="sentential form length cap (default 24)")
    limits.add_argument("--max-visited", type=int, default=2_000_000, metavar="N",
                        help="visited-form cap (default 2000000)")
    limits.add_argument("--max-len", type=int, default=8, metavar="N",
                        help="terminal string length cap for enumeration (default 8)")

    as_json = argparse.ArgumentParser(add_help=False)
    as_json.add_argument("--json", action="store_true", help="emit JSON on stdout")

    p = sub.add_parser("validate", parents=[source, as_json],
                       help="parse a grammar and report problems")
    p.set_defaults(handler=cmd_validate, parser=p)

    p = sub.add_parser("enumerate", parents=[source, limits, as_json],
                       help="terminal strings reachable within the limits")
    p.set_defaults(handler=cmd_enumerate, parser=p)

    p = sub.add_parser("derive", parents=[source, limits, as_json],
                       help="breadth-first search for a derivation of a target form")
    p.add_argument("--target", required=True, metavar="FORM",
                   help="target form, e.g. 'a a b' or 'aab' (eps for the empty word)")
    p.add_argument("--inject", metavar="NT:STRING",
                   help="force one non-terminal to emit terminals in this order")
    p.set_defaults(handler=cmd_derive, parser=p)

    p = sub.add_parser("classify", parents=[source, limits, as_json],
                       help="producer/consumer/modifier roles and grammar verdict")
    p.add_argument("--normalize", action="store_true",
                   help="also split context-sensitive producers into context-free form")
    p.set_defaults(handler=cmd_classify, parser=p)

    p = sub.add_parser("analyze", parents=[source, as_json],
                       help="buffer discipline of seeded random derivations")
    p.add_argument("--left", default="P", metavar="NT", help="left delimiter (default P)")
    p.add_argument("--right", default="Q", metavar="NT", help="right delimiter (default Q)")
    p.add_argument("--priority", metavar="ORDER",
                   help="priority order like 'B>A'; checks deletions and hunts a witness")
    p.add_argument("--require-reorder", action="store_true",
                   help="only accept a priority witness containing a Reorder step")
    p.add_argument("--seeds", type=int, default=50, metavar="N",
                   help="number of seeded walks (default 50)")
    p.add_argument("--seed", type=int, default=0, metavar="N", help="base seed (default 0)")
    p.set_defaults(handler=cmd_analyze, parser=p)

    p = sub.add_parser("indices", parents=[source, as_json],
                       help="production/consumption/transient indices of a stored trace")
    p.add_argument("--trace", required=True, metavar="FILE", help="trace JSON file")
    p.set_defaults(handler=cmd_indices, parser=p)

    p = sub.add_parser("step", parents=[source],
                       help="interactive derivation REPL")
    p.add_argument("--seed", type=int, default=0, metavar="N",
                   help="seed for the `random` command (default 0)")
    p.set_defaults(handler=cmd_step, parser=p)

    p = sub.add_parser("pda", parents=[as_json],
                       help="run inputs through a pushdown automaton")
    spec_src = p.add_mutually_exclusive_group(required=True)
    spec_src.add_argument("--spec", metavar="FILE", help=".pda file to load")
    spec_src.add_argument("--builtin", choices=sorted(BUILTIN_PDAS), help="built-in automaton")
    p.add_argument("--input", action="append", metavar="STRING",
                   help="input word (repeatable; eps for the empty word)")
    p.add_argument("--inputs", metavar="FILE", help="file with one input word per line")
    p.add_argument("--step-limit", type=int, default=10_000, metavar="N",
                   help="configuration exploration cap per input (default 10000)")
    p.set_defaults(handler=cmd_pda, parser=p)

    p = sub.add_parser("corpus", parents=[as_json], help="list or show built-in grammars")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("id", nargs="?", choices=CORPUS_IDS, metavar="ID")
    p.set_defaults(handler=cmd_corpus, parser=p)

    return parser


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except SystemExit as exc:  # argparse usage errors and --help
        code = exc.code
        return code if isinstance(code, int) else 1
    except (GrammarError, RewriteError, AnalysisError, PdaError) as exc:
        print(f"fgw: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"fgw: {exc}", file=sys.stderr)
        return 2


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run_cli(argv))


if __name__ == "__main__":
    main()
