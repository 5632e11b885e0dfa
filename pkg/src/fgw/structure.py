"""Read derivation traces as histories of a buffer held between two
delimiter non-terminals, and classify the access discipline.

A sentential form like ``P a a Q`` is viewed as a buffer ``a a`` between the
delimiters P and Q.  Each derivation step then becomes a buffer operation
(insert/delete at an end, reorder, create/destroy the buffer, ...), and a
set of traces earns a verdict: Queue when one end inserts and the other
deletes, Stack when a single end does both, Deque when both ends do both,
Other when any step falls outside the operation table.

Content diffing alone cannot attribute an end for unary buffers ("a a" to
"a a a" extends either end), so the pipeline resolves ties with the rewrite
geometry: the applied production's span is matched against the delimiter
positions.  Verdicts are claims about the supplied traces, never about all
derivations of the grammar.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from random import Random
from typing import Iterable, Sequence

from .engine import (
    DerivationStep,
    DerivationTrace,
    apply_at,
    find_matches,
    replay_trace,
)
from .grammar import Form, Grammar, Symbol, is_terminal_form


class AnalysisError(ValueError):
    """A trace that cannot be read as a buffer history; ``step`` locates it."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class End(Enum):
    LEFT = "Left"
    RIGHT = "Right"


class BufferOp(Enum):
    CREATE = "Create"
    DESTROY = "Destroy"
    INSERT_LEFT = "InsertLeft"
    INSERT_RIGHT = "InsertRight"
    DELETE_LEFT = "DeleteLeft"
    DELETE_RIGHT = "DeleteRight"
    REORDER = "Reorder"
    UNCHANGED = "Unchanged"
    AMBIGUOUS_END = "AmbiguousEnd"
    OTHER = "Other"


class Discipline(Enum):
    STACK = "Stack"
    QUEUE = "Queue"
    DEQUE = "Deque"
    OTHER = "Other"
    EMPTY = "Empty"


@dataclass(frozen=True)
class BufferSnapshot:
    step_index: int
    contents: tuple[Symbol, ...]
    present: bool

    def __post_init__(self):
        if not self.present and self.contents:
            raise AnalysisError("absent buffer cannot have contents", self.step_index)


@dataclass(frozen=True)
class BufferStep:
    """One classified step: the op, the end it acted on (when attributable),
    the symbol moved (for single-symbol inserts/deletes), and both snapshots."""

    index: int
    op: BufferOp
    end: End | None
    symbol: Symbol | None
    before: BufferSnapshot
    after: BufferSnapshot


@dataclass(frozen=True)
class DisciplineVerdict:
    verdict: Discipline
    op_histogram: dict[BufferOp, int]
    insert_ends: frozenset[End]
    delete_ends: frozenset[End]


@dataclass(frozen=True)
class PriorityViolation:
    step_index: int
    op: BufferOp
    removed: Symbol
    buffer: tuple[Symbol, ...]


@dataclass(frozen=True)
class PriorityReport:
    ok: bool
    violations: tuple[PriorityViolation, ...]


def _delimiter_positions(
    form: Form, left: Symbol, right: Symbol, step_index: int
) -> tuple[int, int] | None:
    """Positions of the two delimiters, None when the buffer is absent.

    More than one occurrence of either delimiter is an error: the form no
    longer reads as a single buffer.
    """
    lefts = [i for i, s in enumerate(form) if s == left]
    rights = [i for i, s in enumerate(form) if s == right]
    if len(lefts) > 1:
        raise AnalysisError(
            f"delimiter {left.name!r} occurs {len(lefts)} times at step {step_index}", step_index
        )
    if len(rights) > 1:
        raise AnalysisError(
            f"delimiter {right.name!r} occurs {len(rights)} times at step {step_index}", step_index
        )
    if len(lefts) == 1 and len(rights) == 1 and lefts[0] < rights[0]:
        return lefts[0], rights[0]
    return None


def _snapshot(form: Form, left: Symbol, right: Symbol, step_index: int) -> BufferSnapshot:
    pos = _delimiter_positions(form, left, right, step_index)
    if pos is None:
        return BufferSnapshot(step_index, (), False)
    li, ri = pos
    return BufferSnapshot(step_index, form[li + 1:ri], True)


def extract_buffer_trace(t: DerivationTrace, left: Symbol, right: Symbol) -> list[BufferSnapshot]:
    """One snapshot per form of the trace (initial form first)."""
    if left == right:
        raise AnalysisError("delimiters must be two distinct symbols")
    return [_snapshot(form, left, right, i) for i, form in enumerate(t.forms())]


def classify_step(
    before: BufferSnapshot, after: BufferSnapshot, end_hint: End | None = None
) -> BufferOp:
    """Buffer operation between two consecutive snapshots.

    When both ends are consistent with the content change (possible only when
    every involved symbol is equal), ``end_hint`` — normally derived from the
    rewrite geometry — decides.  Without a hint, an empty-to-singleton or
    singleton-to-empty change is AmbiguousEnd, and longer ties default to the
    left end.
    """
    if not before.present and not after.present:
        return BufferOp.UNCHANGED
    if not before.present:
        return BufferOp.CREATE
    if not after.present:
        return BufferOp.DESTROY
    b, a = before.contents, after.contents
    if a == b:
        return BufferOp.UNCHANGED
    if len(a) == len(b) + 1:
        left_ok, right_ok = a[1:] == b, a[:-1] == b
        if left_ok and right_ok:
            if end_hint is End.LEFT:
                return BufferOp.INSERT_LEFT
            if end_hint is End.RIGHT:
                return BufferOp.INSERT_RIGHT
            return BufferOp.AMBIGUOUS_END if not b else BufferOp.INSERT_LEFT
        if left_ok:
            return BufferOp.INSERT_LEFT
        if right_ok:
            return BufferOp.INSERT_RIGHT
    if len(a) == len(b) - 1:
        left_ok, right_ok = b[1:] == a, b[:-1] == a
        if left_ok and right_ok:
            if end_hint is End.LEFT:
                return BufferOp.DELETE_LEFT
            if end_hint is End.RIGHT:
                return BufferOp.DELETE_RIGHT
            return BufferOp.AMBIGUOUS_END if not a else BufferOp.DELETE_LEFT
        if left_ok:
            return BufferOp.DELETE_LEFT
        if right_ok:
            return BufferOp.DELETE_RIGHT
    if Counter(a) == Counter(b):
        return BufferOp.REORDER
    return BufferOp.OTHER


def _attribute_end(li: int, ri: int, span_start: int, span_end: int) -> End | None:
    """Which delimiter a rewrite span belongs to.

    Overlap with exactly one delimiter wins; otherwise adjacency to exactly
    one buffer boundary; spans touching both or neither stay unattributed.
    """
    over_left = span_start <= li < span_end
    over_right = span_start <= ri < span_end
    if over_left and not over_right:
        return End.LEFT
    if over_right and not over_left:
        return End.RIGHT
    if over_left and over_right:
        return None
    at_left = span_start == li + 1
    at_right = span_end == ri
    if at_left and not at_right:
        return End.LEFT
    if at_right and not at_left:
        return End.RIGHT
    return None


_END_OF_OP = {
    BufferOp.INSERT_LEFT: End.LEFT,
    BufferOp.INSERT_RIGHT: End.RIGHT,
    BufferOp.DELETE_LEFT: End.LEFT,
    BufferOp.DELETE_RIGHT: End.RIGHT,
}


def classify_buffer_ops(
    g: Grammar, t: DerivationTrace, left: Symbol, right: Symbol
) -> list[BufferStep]:
    """Classify every step of ``t`` with rewrite-geometry end attribution."""
    snaps = extract_buffer_trace(t, left, right)
    forms = t.forms()
    out: list[BufferStep] = []
    for k, step in enumerate(t.steps, start=1):
        before, after = snaps[k - 1], snaps[k]
        hint = None
        if before.present:
            pos = _delimiter_positions(forms[k - 1], left, right, k - 1)
            if pos is not None:
                p = g.productions[step.production_index]
                hint = _attribute_end(pos[0], pos[1], step.position, step.position + len(p.lhs))
        op = classify_step(before, after, hint)
        end = _END_OF_OP.get(op)
        symbol = None
        if op in (BufferOp.INSERT_LEFT, BufferOp.INSERT_RIGHT):
            symbol = after.contents[0] if end is End.LEFT else after.contents[-1]
        elif op in (BufferOp.DELETE_LEFT, BufferOp.DELETE_RIGHT):
            symbol = before.contents[0] if end is End.LEFT else before.contents[-1]
        out.append(BufferStep(k, op, end, symbol, before, after))
    return out


def classify_discipline(
    g: Grammar, left: Symbol, right: Symbol, traces: Sequence[DerivationTrace]
) -> DisciplineVerdict:
    """Verdict over every step of every trace.

    Inserts confined to one end with deletes at the other make a Queue; one
    shared end makes a Stack; either kind at both ends makes a Deque; a
    single step outside the table makes the whole verdict Other.  Reorder
    steps never affect the verdict — reordering is the modifiers' business,
    not the buffer's.
    """
    if not traces:
        raise AnalysisError("no traces supplied")
    histogram: Counter = Counter()
    inserts: set[End] = set()
    deletes: set[End] = set()
    saw_other = False
    for t in traces:
        replay_trace(g, t)
        for step in classify_buffer_ops(g, t, left, right):
            histogram[step.op] += 1
            if step.op is BufferOp.OTHER:
                saw_other = True
            elif step.op in (BufferOp.INSERT_LEFT, BufferOp.INSERT_RIGHT):
                inserts.add(step.end)  # type: ignore[arg-type]
            elif step.op in (BufferOp.DELETE_LEFT, BufferOp.DELETE_RIGHT):
                deletes.add(step.end)  # type: ignore[arg-type]
    if saw_other:
        verdict = Discipline.OTHER
    elif not inserts and not deletes:
        verdict = Discipline.EMPTY
    elif len(inserts) == 2 or len(deletes) == 2:
        verdict = Discipline.DEQUE
    elif inserts and deletes and inserts != deletes:
        verdict = Discipline.QUEUE
    else:
        verdict = Discipline.STACK
    return DisciplineVerdict(verdict, dict(histogram), frozenset(inserts), frozenset(deletes))


def _delete_event(before: BufferSnapshot, after: BufferSnapshot) -> Symbol | None:
    """The symbol removed by a single-symbol end deletion, else None.

    When both ends are consistent the buffer is all one symbol, so the
    removed symbol is the same either way.
    """
    if not (before.present and after.present):
        return None
    b, a = before.contents, after.contents
    if len(a) != len(b) - 1:
        return None
    if b[1:] == a:
        return b[0]
    if b[:-1] == a:
        return b[-1]
    return None


def check_priority_discipline(
    t: DerivationTrace, left: Symbol, right: Symbol, priority: Sequence[Symbol]
) -> PriorityReport:
    """Check that every end deletion removes a highest-priority buffered symbol.

    ``priority`` lists buffer symbols from highest to lowest.  Buffered
    symbols outside the order do not compete; a *deleted* symbol outside the
    order is an error.
    """
    rank = {s: i for i, s in enumerate(priority)}
    snaps = extract_buffer_trace(t, left, right)
    violations: list[PriorityViolation] = []
    for k in range(1, len(snaps)):
        before, after = snaps[k - 1], snaps[k]
        removed = _delete_event(before, after)
        if removed is None:
            continue
        if removed not in rank:
            raise AnalysisError(
                f"deleted symbol {removed.name!r} is not in the priority order", k
            )
        competing = [rank[s] for s in before.contents if s in rank]
        if rank[removed] != min(competing):
            violations.append(
                PriorityViolation(k, classify_step(before, after), removed, before.contents)
            )
    return PriorityReport(not violations, tuple(violations))


def random_complete_trace(
    g: Grammar,
    seed: int,
    *,
    soft_len: int = 8,
    max_steps: int = 400,
    attempts: int = 25,
) -> DerivationTrace | None:
    """Seeded random walk from the start symbol to a terminal form.

    Successors are drawn uniformly; above ``soft_len`` the walk prefers
    shrinking productions (then non-growing ones) so it drifts back toward
    termination.  Dead ends and overlong walks restart, up to ``attempts``
    times; None means no complete derivation was found.
    """
    rng = Random(seed)
    growth = [len(p.rhs) - len(p.lhs) for p in g.productions]
    for _ in range(attempts):
        form: Form = (g.start,)
        steps: list[DerivationStep] = []
        for _ in range(max_steps):
            if is_terminal_form(form):
                return DerivationTrace(g.name, (g.start,), tuple(steps))
            matches = find_matches(g, form)
            if not matches:
                break
            pool = matches
            if len(form) > soft_len:
                pool = (
                    [m for m in matches if growth[m.production_index] < 0]
                    or [m for m in matches if growth[m.production_index] <= 0]
                    or matches
                )
            m = rng.choice(pool)
            form = apply_at(form, g, m)
            steps.append(DerivationStep(m.production_index, m.position, form))
    return None


def seeded_traces(
    g: Grammar,
    count: int = 50,
    base_seed: int = 0,
    **walk_kwargs,
) -> list[DerivationTrace]:
    """Complete traces for seeds base_seed .. base_seed+count-1 (failures
    are dropped, so the list can be shorter than ``count``)."""
    out = []
    for i in range(count):
        t = random_complete_trace(g, base_seed + i, **walk_kwargs)
        if t is not None:
            out.append(t)
    return out


def find_priority_witness(
    g: Grammar,
    left: Symbol,
    right: Symbol,
    priority: Sequence[Symbol],
    *,
    seeds: int = 200,
    base_seed: int = 0,
    require_reorder: bool = True,
    soft_len: int = 10,
    max_steps: int = 300,
) -> tuple[int, DerivationTrace] | None:
    """Search seeded constrained walks for a complete, priority-respecting
    derivation (optionally containing at least one Reorder step).

    The walk refuses steps that classify as Other and end deletions that
    would remove a non-maximal symbol, then the found trace is re-verified
    with :func:`check_priority_discipline`.  Returns (seed, trace) or None.
    """
    rank = {s: i for i, s in enumerate(priority)}
    growth = [len(p.rhs) - len(p.lhs) for p in g.productions]
    for seed in range(base_seed, base_seed + seeds):
        rng = Random(seed)
        trace = _priority_walk(g, rng, left, right, rank, growth, soft_len, max_steps)
        if trace is None:
            continue
        if not check_priority_discipline(trace, left, right, priority).ok:
            continue
        if require_reorder:
            ops = classify_buffer_ops(g, trace, left, right)
            if not any(s.op is BufferOp.REORDER for s in ops):
                continue
        return seed, trace
    return None


def _priority_walk(g, rng, left, right, rank, growth, soft_len, max_steps):
    form: Form = (g.start,)
    before = _snapshot(form, left, right, 0)
    steps: list[DerivationStep] = []
    for _ in range(max_steps):
        if is_terminal_form(form):
            return DerivationTrace(g.name, (g.start,), tuple(steps))
        allowed = []
        for m in find_matches(g, form):
            nxt = apply_at(form, g, m)
            after = _snapshot(nxt, left, right, 0)
            if classify_step(before, after) is BufferOp.OTHER:
                continue
            removed = _delete_event(before, after)
            if removed is not None and removed in rank:
                competing = [rank[s] for s in before.contents if s in rank]
                if rank[removed] != min(competing):
                    continue
            elif removed is not None:
                continue
            allowed.append((m, nxt, after))
        if not allowed:
            return None
        pool = allowed
        if len(form) > soft_len:
            pool = (
                [o for o in allowed if growth[o[0].production_index] < 0]
                or [o for o in allowed if growth[o[0].production_index] <= 0]
                or allowed
            )
        m, form, before = pool[rng.randrange(len(pool))]
        steps.append(DerivationStep(m.production_index, m.position, form))
    return None


def analysis_to_json(
    verdict: DisciplineVerdict,
    violations: Iterable[tuple[int, PriorityViolation]] = (),
) -> dict:
    return {
        "verdict": verdict.verdict.value,
        "insert_ends": sorted(e.value for e in verdict.insert_ends),
        "delete_ends": sorted(e.value for e in verdict.delete_ends),
        "histogram": {
            op.value: verdict.op_histogram[op]
            for op in BufferOp
            if verdict.op_histogram.get(op)
        },
        "violations": [
            {"trace": i, "step": v.step_index, "op": v.op.value}
            for i, v in violations
        ],
    }
