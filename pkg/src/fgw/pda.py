"""Nondeterministic pushdown-automaton simulator.

Runs are breadth-first searches over configurations (state, input position,
stack) with deduplication, made total by a step limit.  Every stack content
seen in any reachable configuration is recorded, so a run yields both an
acceptance answer and the set of stack configurations — the
"configuration language" — observed while reading the input.

Stacks are written top-at-right everywhere: a transition's push sequence is
appended as written, so its last token becomes the new top.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence


class PdaError(ValueError):
    """Malformed `.pda` text or an ill-typed run request."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class AcceptMode(Enum):
    FINAL_STATE = "final"
    EMPTY_STACK = "empty"
    BOTH = "both"


@dataclass(frozen=True)
class PdaTransition:
    """src --(input, pop top)--> dst, push tokens.

    ``input`` None reads no input; ``top`` None pops nothing (the move works
    whatever the stack holds, including empty).
    """

    src: str
    input: str | None
    top: str | None
    dst: str
    push: tuple[str, ...] = ()


@dataclass(frozen=True)
class PdaSpec:
    states: frozenset[str]
    input_alphabet: frozenset[str]
    stack_alphabet: frozenset[str]
    start_state: str
    accepting_states: frozenset[str]
    transitions: tuple[PdaTransition, ...]
    acceptance_mode: AcceptMode
    initial_stack: tuple[str, ...] = ()

    def by_state(self) -> Mapping[str, tuple[PdaTransition, ...]]:
        index: dict[str, list[PdaTransition]] = {}
        for t in self.transitions:
            index.setdefault(t.src, []).append(t)
        return {s: tuple(ts) for s, ts in index.items()}


@dataclass(frozen=True)
class PdaRunResult:
    accepted: bool
    inconclusive: bool
    configs: frozenset[tuple[str, ...]]


@dataclass(frozen=True)
class ConfigLanguage:
    """Union of stack contents observed across a batch of runs; inputs whose
    run hit the step limit are listed so the union is known incomplete."""

    configs: frozenset[tuple[str, ...]]
    inconclusive_inputs: tuple[tuple[str, ...], ...] = ()


_HEADERS = ("states", "start", "accept", "input", "stack", "mode")


def parse_pda(source: str) -> PdaSpec:
    """Parse `.pda` text: headers, then one transition per line.

    Headers: ``states:``, ``start:``, ``accept:``, ``input:``, ``stack:``,
    ``mode: final|empty|both``.  Transitions read
    ``src, input|eps, top|eps -> dst, push tokens|eps``.
    """
    sets: dict[str, set[str]] = {"states": set(), "accept": set(), "input": set(), "stack": set()}
    start: str | None = None
    mode: AcceptMode | None = None
    raw_transitions: list[tuple[int, str]] = []

    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = re.match(r"(\w+):\s*(.*)$", line)
        if head and head.group(1) in _HEADERS:
            key, value = head.group(1), head.group(2).strip()
            if key in sets:
                sets[key].update(value.split())
            elif key == "start":
                if start is not None:
                    raise PdaError("duplicate start header", lineno)
                if not value or len(value.split()) != 1:
                    raise PdaError("start needs exactly one state", lineno)
                start = value
            else:  # mode
                if mode is not None:
                    raise PdaError("duplicate mode header", lineno)
                try:
                    mode = AcceptMode(value)
                except ValueError:
                    raise PdaError(
                        f"unknown mode {value!r} (expected final, empty, or both)", lineno
                    ) from None
            continue
        raw_transitions.append((lineno, line))

    if not sets["states"]:
        raise PdaError("missing states header")
    if start is None:
        raise PdaError("missing start header")
    if mode is None:
        raise PdaError("missing mode header")
    if start not in sets["states"]:
        raise PdaError(f"start state {start!r} is not declared")
    stray = sets["accept"] - sets["states"]
    if stray:
        raise PdaError(f"accepting states not declared: {', '.join(sorted(stray))}")

    transitions = []
    for lineno, line in raw_transitions:
        transitions.append(_parse_transition(line, lineno, sets))

    return PdaSpec(
        states=frozenset(sets["states"]),
        input_alphabet=frozenset(sets["input"]),
        stack_alphabet=frozenset(sets["stack"]),
        start_state=start,
        accepting_states=frozenset(sets["accept"]),
        transitions=tuple(transitions),
        acceptance_mode=mode,
    )


def _parse_transition(line: str, lineno: int, sets: dict[str, set[str]]) -> PdaTransition:
    parts = line.split("->")
    if len(parts) != 2:
        raise PdaError("transition needs exactly one '->'", lineno)
    lhs = [p.strip() for p in parts[0].split(",")]
    rhs = [p.strip() for p in parts[1].split(",")]
    if len(lhs) != 3:
        raise PdaError("left side must be 'state, input|eps, top|eps'", lineno)
    if len(rhs) != 2:
        raise PdaError("right side must be 'state, push tokens|eps'", lineno)
    src, inp, top = lhs
    dst, push_clause = rhs
    if src not in sets["states"]:
        raise PdaError(f"unknown state {src!r}", lineno)
    if dst not in sets["states"]:
        raise PdaError(f"unknown state {dst!r}", lineno)
    if inp != "eps" and inp not in sets["input"]:
        raise PdaError(f"input symbol {inp!r} is not declared", lineno)
    if top != "eps" and top not in sets["stack"]:
        raise PdaError(f"stack symbol {top!r} is not declared", lineno)
    m = re.match(r"push(?:\s+(.*))?$", push_clause)
    if not m:
        raise PdaError("right side must end with 'push <tokens|eps>'", lineno)
    push_text = (m.group(1) or "").strip()
    if not push_text:
        raise PdaError("push needs tokens or eps", lineno)
    if push_text == "eps":
        push: tuple[str, ...] = ()
    else:
        push = tuple(push_text.split())
        bad = [t for t in push if t not in sets["stack"]]
        if bad:
            raise PdaError(f"push symbols not declared: {', '.join(bad)}", lineno)
    return PdaTransition(
        src,
        None if inp == "eps" else inp,
        None if top == "eps" else top,
        dst,
        push,
    )


def pda_run(spec: PdaSpec, input_tokens: Sequence[str], step_limit: int = 10_000) -> PdaRunResult:
    """Run one input to the bitter end (or the step limit).

    The whole reachable configuration space is explored even after an
    accepting configuration is found, because the point is the set of stack
    contents observed, not just the yes/no answer.
    """
    if step_limit <= 0:
        raise PdaError("step_limit must be strictly positive")
    tokens = tuple(input_tokens)
    foreign = [t for t in tokens if t not in spec.input_alphabet]
    if foreign:
        raise PdaError(f"input symbols not in the alphabet: {', '.join(foreign)}")

    by_state = spec.by_state()
    n = len(tokens)

    def accepting(state: str, pos: int, stack: tuple[str, ...]) -> bool:
        if pos != n:
            return False
        by_final = state in spec.accepting_states
        by_empty = not stack
        if spec.acceptance_mode is AcceptMode.FINAL_STATE:
            return by_final
        if spec.acceptance_mode is AcceptMode.EMPTY_STACK:
            return by_empty
        return by_final and by_empty

    initial = (spec.start_state, 0, spec.initial_stack)
    seen = {initial}
    configs = {spec.initial_stack}
    accepted = accepting(*initial)
    queue = deque([initial])
    processed = 0
    inconclusive = False
    while queue:
        if processed >= step_limit:
            inconclusive = True
            break
        state, pos, stack = queue.popleft()
        processed += 1
        for t in by_state.get(state, ()):
            if t.input is not None:
                if pos >= n or tokens[pos] != t.input:
                    continue
                new_pos = pos + 1
            else:
                new_pos = pos
            if t.top is not None:
                if not stack or stack[-1] != t.top:
                    continue
                new_stack = stack[:-1] + t.push
            else:
                new_stack = stack + t.push
            nxt = (t.dst, new_pos, new_stack)
            if nxt in seen:
                continue
            seen.add(nxt)
            configs.add(new_stack)
            if accepting(*nxt):
                accepted = True
            queue.append(nxt)
    return PdaRunResult(accepted, inconclusive, frozenset(configs))


def config_language(
    spec: PdaSpec, inputs: Iterable[Sequence[str]], step_limit: int = 10_000
) -> ConfigLanguage:
    """Union of the configuration sets over a batch of inputs."""
    configs: set[tuple[str, ...]] = set()
    inconclusive: list[tuple[str, ...]] = []
    for tokens in inputs:
        result = pda_run(spec, tokens, step_limit)
        configs |= result.configs
        if result.inconclusive:
            inconclusive.append(tuple(tokens))
    return ConfigLanguage(frozenset(configs), tuple(inconclusive))


def render_stack(stack: Sequence[str]) -> str:
    """Compact stack rendering, top at the right; ε for the empty stack."""
    if not stack:
        return "ε"
    if all(len(t) == 1 for t in stack):
        return "".join(stack)
    return " ".join(stack)


def run_to_json(result: PdaRunResult) -> dict:
    return {
        "accepted": result.accepted,
        "inconclusive": result.inconclusive,
        "configs": sorted(
            ("" if not c else render_stack(c) for c in result.configs), key=lambda s: (len(s), s)
        ),
    }


PARENS_PDA_SOURCE = """\
# Balanced-parenthesis checker with a single state: push every '(',
# pop one on every ')'; accept at end of input with an empty stack.
states: q
start: q
accept: q
input: ( )
stack: (
mode: both
q, (, eps -> q, push (
q, ), ( -> q, push eps
"""

PARENS_PDA = parse_pda(PARENS_PDA_SOURCE)
