"""Semi-Thue rewriting: match/apply, bounded breadth-first derivation search,
language and sentential-form enumeration, trace replay, and trace indices.

Every search takes explicit :class:`SearchLimits` and is total: candidates
beyond the limits are pruned, and whether pruning happened is reported, so a
negative answer is an honest certificate.  ``ExhaustedComplete`` means the
target is unreachable through any form respecting the limits; if anything was
pruned the result is downgraded to ``ExhaustedPruned``.

Successor order is fixed: matches are expanded by (position, production
index), and the frontier is a FIFO over forms, so all results are
deterministic for a given grammar and limits.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping, Sequence

from .grammar import Form, Grammar, Symbol, render_form, terminal_count


class RewriteError(ValueError):
    """A rewrite request that cannot be honored (bad match, foreign symbol)."""


class ReplayError(RewriteError):
    """A stored trace that does not replay; ``step`` is the failing index."""

    def __init__(self, step: int, message: str):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class Match:
    production_index: int
    position: int


@dataclass(frozen=True)
class DerivationStep:
    production_index: int
    position: int
    form_after: Form


@dataclass(frozen=True)
class DerivationTrace:
    grammar_name: str
    initial: Form
    steps: tuple[DerivationStep, ...]

    @property
    def final(self) -> Form:
        return self.steps[-1].form_after if self.steps else self.initial

    def forms(self) -> list[Form]:
        """Initial form followed by the form after each step."""
        return [self.initial] + [s.form_after for s in self.steps]


@dataclass(frozen=True)
class SearchLimits:
    """Bounds that make every search total.

    ``max_steps`` caps derivation length (BFS depth), ``max_form_len`` prunes
    longer sentential forms, ``max_visited`` caps the dedup set, and
    ``max_string_len`` restricts which terminal strings enumeration reports.
    """

    max_steps: int = 64
    max_form_len: int = 24
    max_visited: int = 2_000_000
    max_string_len: int = 8

    def __post_init__(self):
        for name in ("max_steps", "max_form_len", "max_visited", "max_string_len"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")


class SearchStatus(Enum):
    FOUND = "Found"
    EXHAUSTED_COMPLETE = "ExhaustedComplete"
    EXHAUSTED_PRUNED = "ExhaustedPruned"


@dataclass(frozen=True)
class SearchOutcome:
    status: SearchStatus
    trace: DerivationTrace | None = None

    @property
    def found(self) -> bool:
        return self.status is SearchStatus.FOUND


@dataclass(frozen=True)
class TraceIndices:
    """Terminal bookkeeping along one derivation.

    ``production_index`` sums the positive per-step terminal deltas,
    ``consumption_index`` the negative ones, and ``transient_index`` is the
    net terminal change between the first and last form, so
    ``production_index - consumption_index == transient_index`` always holds
    for a replayable trace.
    """

    production_index: int
    consumption_index: int
    transient_index: int


@dataclass(frozen=True)
class LanguageEnumeration:
    """Terminal strings reachable under the limits, with one witness each.

    Keys of ``strings`` are token-name tuples (``()`` is the empty word), in
    discovery order.  ``pruned`` reports whether any candidate was dropped
    for exceeding a limit, i.e. whether the closure was fully explored.
    """

    strings: dict[tuple[str, ...], DerivationTrace] = field(default_factory=dict)
    pruned: bool = False


#: Step predicate for constrained searches: (trace so far, candidate match).
StepFilter = Callable[[DerivationTrace, Match], bool]


def _check_form(g: Grammar, form: Form) -> None:
    for s in form:
        if s not in g.alphabet:
            raise RewriteError(f"symbol {s.name!r} is not in the alphabet of {g.name!r}")


def find_matches(g: Grammar, form: Form) -> list[Match]:
    """All (production, position) pairs applicable to ``form``,
    ordered by position first and production index second."""
    _check_form(g, form)
    by_first: dict[Symbol, list] = {}
    for p in g.productions:
        by_first.setdefault(p.lhs[0], []).append(p)
    out = []
    n = len(form)
    for pos in range(n):
        for p in by_first.get(form[pos], ()):
            if n - pos >= len(p.lhs) and form[pos:pos + len(p.lhs)] == p.lhs:
                out.append(Match(p.index, pos))
    return out


def apply_at(form: Form, g: Grammar, match: Match) -> Form:
    if not 0 <= match.production_index < len(g.productions):
        raise RewriteError(f"grammar {g.name!r} has no production {match.production_index}")
    p = g.productions[match.production_index]
    window = form[match.position:match.position + len(p.lhs)]
    if window != p.lhs:
        raise RewriteError(
            f"production {p.index} ({p}) does not match at position {match.position}: "
            f"expected {render_form(p.lhs)}, found {render_form(window)}"
        )
    return form[:match.position] + p.rhs + form[match.position + len(p.lhs):]


def successors(g: Grammar, form: Form) -> list[tuple[Match, Form]]:
    """Every one-step rewrite of ``form``, in match order."""
    return [(m, apply_at(form, g, m)) for m in find_matches(g, form)]


class _Codec:
    """Grammar-local encoding of forms as strings of one char per symbol.

    String hashing, slicing, and ``str.find`` run at C speed, which keeps
    closure searches over a few hundred thousand forms affordable.  Results
    are decoded back into symbol tuples at the API boundary; replay of the
    produced traces cross-checks the fast path against ``apply_at``.
    """

    def __init__(self, g: Grammar):
        self.grammar = g
        symbols = sorted(g.alphabet, key=lambda s: (s.kind.value, s.name))
        self._to_char = {s: chr(33 + i) for i, s in enumerate(symbols)}
        self._from_char = {c: s for s, c in self._to_char.items()}
        self.rules: list[tuple[str, str]] = [
            ("".join(self._to_char[s] for s in p.lhs), "".join(self._to_char[s] for s in p.rhs))
            for p in g.productions
        ]
        self._nt_chars = frozenset(c for s, c in self._to_char.items() if not s.is_terminal)

    def encode(self, form: Form) -> str:
        try:
            return "".join(self._to_char[s] for s in form)
        except KeyError as exc:
            raise RewriteError(
                f"symbol {exc.args[0].name!r} is not in the alphabet of {self.grammar.name!r}"
            ) from None

    def decode(self, s: str) -> Form:
        return tuple(self._from_char[c] for c in s)

    def matches(self, s: str) -> list[tuple[int, int]]:
        """(position, production index) pairs, sorted in that order."""
        out = []
        for idx, (lhs, _) in enumerate(self.rules):
            pos = s.find(lhs)
            while pos != -1:
                out.append((pos, idx))
                pos = s.find(lhs, pos + 1)
        out.sort()
        return out

    def is_terminal(self, s: str) -> bool:
        return not any(c in self._nt_chars for c in s)


def _rebuild_trace(codec: _Codec, parents: Mapping[str, tuple | None], enc: str) -> DerivationTrace:
    chain = []
    cur = enc
    while parents[cur] is not None:
        parent, idx, pos = parents[cur]  # type: ignore[misc]
        chain.append((idx, pos, cur))
        cur = parent
    chain.reverse()
    g = codec.grammar
    steps = tuple(DerivationStep(idx, pos, codec.decode(after)) for idx, pos, after in chain)
    return DerivationTrace(g.name, (g.start,), steps)


def _explore(
    g: Grammar,
    lim: SearchLimits,
    target: str | None,
    codec: _Codec,
    step_filter: StepFilter | None = None,
    goal_check: Callable[[DerivationTrace], bool] | None = None,
):
    """Shared BFS core.

    Returns ``(found_trace, parents, pruned)`` where ``found_trace`` is None
    unless the target was reached (and accepted by ``goal_check``).  The
    ``parents`` map holds every visited form keyed by its encoding.
    """
    start_enc = codec.encode((g.start,))
    parents: dict[str, tuple | None] = {start_enc: None}
    pruned = False

    if target is not None and start_enc == target:
        trace = DerivationTrace(g.name, (g.start,), ())
        if goal_check is None or goal_check(trace):
            return trace, parents, pruned

    rules = codec.rules
    queue = deque([(start_enc, 0)])
    while queue:
        enc, depth = queue.popleft()
        cand = codec.matches(enc)
        base_trace = None
        if step_filter is not None:
            base_trace = _rebuild_trace(codec, parents, enc)
            cand = [(pos, idx) for pos, idx in cand
                    if step_filter(base_trace, Match(idx, pos))]
        next_depth = depth + 1
        over_depth = next_depth > lim.max_steps
        for pos, idx in cand:
            lhs, rhs = rules[idx]
            nxt = enc[:pos] + rhs + enc[pos + len(lhs):]
            if over_depth or len(nxt) > lim.max_form_len:
                if nxt not in parents:
                    pruned = True
                continue
            if target is not None and nxt == target:
                if base_trace is None:
                    base_trace = _rebuild_trace(codec, parents, enc)
                trace = DerivationTrace(
                    g.name, base_trace.initial,
                    base_trace.steps + (DerivationStep(idx, pos, codec.decode(nxt)),),
                )
                if goal_check is None or goal_check(trace):
                    return trace, parents, pruned
                continue
            if nxt in parents:
                continue
            if len(parents) >= lim.max_visited:
                pruned = True
                continue
            parents[nxt] = (enc, idx, pos)
            queue.append((nxt, next_depth))
    return None, parents, pruned


def bfs_derive(
    g: Grammar,
    target: Form,
    lim: SearchLimits = SearchLimits(),
    step_filter: StepFilter | None = None,
) -> SearchOutcome:
    """Breadth-first search from the start symbol to ``target``.

    ``target`` may be any form over the grammar's alphabet (typically all
    terminals).  A ``Found`` trace replays to the target; otherwise the
    outcome says whether the bounded closure was explored completely.
    """
    codec = _Codec(g)
    trace, _, pruned = _explore(g, lim, codec.encode(target), codec, step_filter)
    if trace is not None:
        return SearchOutcome(SearchStatus.FOUND, trace)
    status = SearchStatus.EXHAUSTED_PRUNED if pruned else SearchStatus.EXHAUSTED_COMPLETE
    return SearchOutcome(status)


def constrained_derive(
    g: Grammar,
    injector: Symbol,
    injection_order: Sequence[Symbol],
    target: Form,
    lim: SearchLimits = SearchLimits(),
) -> SearchOutcome:
    """``bfs_derive`` restricted so that the ``injector`` non-terminal emits
    terminals exactly in ``injection_order``.

    Steps rewriting ``injector`` alone are denied when they would inject the
    wrong next terminal, the injector's empty production is denied while the
    order is unconsumed, and a Found trace must have consumed the whole order.
    """
    single = [p for p in g.productions if p.lhs == (injector,)]
    if not single:
        raise RewriteError(f"injector {injector.name!r} has no single-symbol-lhs productions")
    order = tuple(injection_order)
    for s in order:
        if not s.is_terminal:
            raise RewriteError(f"injection order must be terminals, got {s.name!r}")

    injects = {p.index: tuple(s for s in p.rhs if s.is_terminal) for p in single}

    def consumed(trace: DerivationTrace) -> int:
        return sum(len(injects.get(s.production_index, ())) for s in trace.steps)

    def allow(trace: DerivationTrace, match: Match) -> bool:
        emitted = injects.get(match.production_index)
        if emitted is None:
            return True
        done = consumed(trace)
        p = g.productions[match.production_index]
        if not p.rhs:  # the injector's empty production
            return done >= len(order)
        if not emitted:
            return True
        return order[done:done + len(emitted)] == emitted

    def complete(trace: DerivationTrace) -> bool:
        return consumed(trace) == len(order)

    codec = _Codec(g)
    trace, _, pruned = _explore(g, lim, codec.encode(target), codec, allow, complete)
    if trace is not None:
        return SearchOutcome(SearchStatus.FOUND, trace)
    status = SearchStatus.EXHAUSTED_PRUNED if pruned else SearchStatus.EXHAUSTED_COMPLETE
    return SearchOutcome(status)


def enumerate_language(g: Grammar, lim: SearchLimits = SearchLimits()) -> LanguageEnumeration:
    """All terminal strings of length <= ``max_string_len`` reachable under
    the limits, each with one witness derivation, in discovery order."""
    codec = _Codec(g)
    _, parents, pruned = _explore(g, lim, None, codec)
    strings: dict[tuple[str, ...], DerivationTrace] = {}
    for enc in parents:
        if len(enc) <= lim.max_string_len and codec.is_terminal(enc):
            key = tuple(s.name for s in codec.decode(enc))
            strings[key] = _rebuild_trace(codec, parents, enc)
    return LanguageEnumeration(strings, pruned)


def enumerate_forms(g: Grammar, lim: SearchLimits = SearchLimits()) -> set[Form]:
    """Every sentential form (terminal or not) reachable under the limits."""
    codec = _Codec(g)
    _, parents, _ = _explore(g, lim, None, codec)
    return {codec.decode(enc) for enc in parents}


def replay_trace(g: Grammar, trace: DerivationTrace) -> Form:
    """Re-apply every step of ``trace`` under ``g``; returns the final form.

    Raises :class:`ReplayError` with the step index if a step fails to match
    or the stored ``form_after`` diverges from the recomputed form.
    """
    if trace.grammar_name != g.name:
        raise RewriteError(f"trace was recorded for {trace.grammar_name!r}, not {g.name!r}")
    form = trace.initial
    _check_form(g, form)
    for k, step in enumerate(trace.steps):
        try:
            form = apply_at(form, g, Match(step.production_index, step.position))
        except RewriteError as exc:
            raise ReplayError(k, f"step {k}: {exc}") from None
        if form != step.form_after:
            raise ReplayError(
                k,
                f"step {k}: recorded form diverges: recomputed {render_form(form)}, "
                f"stored {render_form(step.form_after)}",
            )
    return form


def trace_indices(g: Grammar, trace: DerivationTrace) -> TraceIndices:
    """Production/consumption/transient indices of a replayable trace."""
    final = replay_trace(g, trace)
    pi = ci = 0
    for step in trace.steps:
        delta = g.productions[step.production_index].terminal_delta()
        if delta > 0:
            pi += delta
        else:
            ci -= delta
    ti = terminal_count(final) - terminal_count(trace.initial)
    return TraceIndices(pi, ci, ti)


def trace_to_json(trace: DerivationTrace) -> dict:
    return {
        "grammar": trace.grammar_name,
        "initial": [s.name for s in trace.initial],
        "steps": [
            {"rule": s.production_index, "pos": s.position, "after": [x.name for x in s.form_after]}
            for s in trace.steps
        ],
    }


def trace_from_json(g: Grammar, data: dict) -> DerivationTrace:
    """Rebuild a trace from its JSON form; symbols are resolved against ``g``.

    The result is not replayed here; pass it to :func:`replay_trace` or
    :func:`trace_indices` to validate it.
    """
    try:
        grammar_name = data["grammar"]
        initial = tuple(g.symbol(n) for n in data["initial"])
        steps = tuple(
            DerivationStep(int(s["rule"]), int(s["pos"]), tuple(g.symbol(n) for n in s["after"]))
            for s in data["steps"]
        )
    except (KeyError, TypeError) as exc:
        raise RewriteError(f"malformed trace JSON: {exc}") from None
    return DerivationTrace(grammar_name, initial, steps)


def trace_dumps(trace: DerivationTrace) -> str:
    return json.dumps(trace_to_json(trace), ensure_ascii=False)


def render_trace(g: Grammar, trace: DerivationTrace) -> str:
    """Human-readable derivation listing, one form per line with the rule used."""
    width = max(len(str(p)) for p in g.productions) if g.productions else 0
    lines = [f"{'':>{width + 6}}  {render_form(trace.initial)}"]
    for step in trace.steps:
        p = g.productions[step.production_index]
        lines.append(f"[{p.index:>2}] {str(p):<{width}}  {render_form(step.form_after)}")
    return "\n".join(lines)
