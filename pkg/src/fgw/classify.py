"""Non-terminal role detection and grammar-level verdicts.

Roles are assigned per non-terminal by syntactic rule inspection:

* context-free producer (``pnt_cf``): can introduce terminals through
  single-symbol-lhs rules alone — the least fixpoint of "some rule V -> rhs
  has a terminal or another cf-producer in rhs";
* context-sensitive producer (``pnt_cs``): sits in the lhs of a
  terminal-increasing rule that needs surrounding context;
* consumer (``cnt``): sits in the lhs of a terminal-decreasing rule next to
  a terminal it helps consume;
* modifier (``mnt``): none of the above.

Flags other than ``mnt`` may co-occur.  Every flag carries evidence — the
production indices that witness it — so reports are auditable.

The grammar-level verdict combines the role table with a bounded language
enumeration, and is therefore always qualified "up to bound" except for the
purely syntactic PureNull case.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .engine import SearchLimits, TraceIndices, enumerate_language, trace_indices
from .grammar import Grammar, Production, Symbol, nonterminal, validate_grammar


class Verdict(Enum):
    PURE_NULL = "PureNull"
    PURELY_FUNCTIONAL = "PurelyFunctionalUpToBound"
    FUNCTIONAL = "FunctionalUpToBound"
    INCONCLUSIVE = "InconclusiveUpToBound"


@dataclass(frozen=True)
class RoleFlags:
    pnt_cf: bool = False
    pnt_cs: bool = False
    cnt: bool = False
    mnt: bool = False

    @staticmethod
    def make(pnt_cf: bool, pnt_cs: bool, cnt: bool) -> "RoleFlags":
        return RoleFlags(pnt_cf, pnt_cs, cnt, mnt=not (pnt_cf or pnt_cs or cnt))

    def names(self) -> tuple[str, ...]:
        return tuple(n for n in ("pnt_cf", "pnt_cs", "cnt", "mnt") if getattr(self, n))


@dataclass(frozen=True)
class Evidence:
    """Witness production indices per flag.

    ``pnt_cf`` is the fixpoint chain: the first index rewrites the flagged
    symbol, each later index justifies the producer used by the one before.
    The other two hold a single witnessing rule each.
    """

    pnt_cf: tuple[int, ...] | None = None
    pnt_cs: tuple[int, ...] | None = None
    cnt: tuple[int, ...] | None = None


@dataclass(frozen=True)
class GrammarVerdict:
    kind: Verdict
    limits: SearchLimits


@dataclass(frozen=True)
class IndexSummary:
    """Min/max trace indices over the witness derivations found by bounded
    enumeration, plus how many derivations were aggregated."""

    pi: tuple[int, int]
    ci: tuple[int, int]
    ti: tuple[int, int]
    derivations: int


@dataclass(frozen=True)
class ClassificationReport:
    grammar_name: str
    roles: dict[Symbol, RoleFlags]
    evidence: dict[Symbol, Evidence]
    verdict: GrammarVerdict
    index_summary: IndexSummary | None


def classify_cf_pnt(g: Grammar) -> dict[Symbol, tuple[int, ...]]:
    """Context-free producers with their fixpoint evidence chains.

    V qualifies when some production with lhs exactly [V] has an rhs
    containing a terminal or an already-qualified producer.  Iterated to a
    least fixpoint; the first chain found for a symbol is kept.
    """
    chains: dict[Symbol, tuple[int, ...]] = {}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if len(p.lhs) != 1 or p.lhs[0] in chains:
                continue
            for s in p.rhs:
                if s.is_terminal:
                    chains[p.lhs[0]] = (p.index,)
                    changed = True
                    break
                if s in chains:
                    chains[p.lhs[0]] = (p.index,) + chains[s]
                    changed = True
                    break
    return chains


def classify_cs_pnt(g: Grammar) -> dict[Symbol, tuple[int, ...]]:
    """Context-sensitive producers: every non-terminal in the lhs of a
    terminal-increasing rule whose lhs is more than that symbol alone."""
    found: dict[Symbol, tuple[int, ...]] = {}
    for p in g.productions:
        if p.terminal_delta() <= 0:
            continue
        for s in p.lhs:
            if not s.is_terminal and p.lhs != (s,) and s not in found:
                found[s] = (p.index,)
    return found


def classify_cnt(g: Grammar) -> dict[Symbol, tuple[int, ...]]:
    """Consumers: non-terminals adjacent to a terminal in the lhs of a
    terminal-decreasing rule."""
    found: dict[Symbol, tuple[int, ...]] = {}
    for p in g.productions:
        if p.terminal_delta() >= 0:
            continue
        for i, s in enumerate(p.lhs):
            if s.is_terminal or s in found:
                continue
            left = p.lhs[i - 1] if i > 0 else None
            right = p.lhs[i + 1] if i + 1 < len(p.lhs) else None
            if (left is not None and left.is_terminal) or (right is not None and right.is_terminal):
                found[s] = (p.index,)
    return found


def classify_all(g: Grammar, lim: SearchLimits = SearchLimits()) -> ClassificationReport:
    """Full role table, verdict, and index summary for one grammar.

    The verdict is PureNull when no producer flag exists anywhere (then no
    terminal can ever be introduced, so the language is at most {ε});
    otherwise it reflects the bounded enumeration: Functional when a
    non-empty string was found, PurelyFunctional when only ε was, and
    Inconclusive when nothing terminated within the limits.
    """
    cf = classify_cf_pnt(g)
    cs = classify_cs_pnt(g)
    cn = classify_cnt(g)

    roles: dict[Symbol, RoleFlags] = {}
    evidence: dict[Symbol, Evidence] = {}
    for s in sorted(g.nonterminals, key=lambda x: x.name):
        roles[s] = RoleFlags.make(s in cf, s in cs, s in cn)
        if s in cf or s in cs or s in cn:
            evidence[s] = Evidence(cf.get(s), cs.get(s), cn.get(s))

    lang = enumerate_language(g, lim)
    if not cf and not cs:
        kind = Verdict.PURE_NULL
    elif any(key for key in lang.strings):
        kind = Verdict.FUNCTIONAL
    elif () in lang.strings:
        kind = Verdict.PURELY_FUNCTIONAL
    else:
        kind = Verdict.INCONCLUSIVE
    summary = _summarize_indices(g, lang.strings.values())
    return ClassificationReport(g.name, roles, evidence, GrammarVerdict(kind, lim), summary)


def _summarize_indices(g: Grammar, traces) -> IndexSummary | None:
    all_indices: list[TraceIndices] = [trace_indices(g, t) for t in traces]
    if not all_indices:
        return None
    pis = [ix.production_index for ix in all_indices]
    cis = [ix.consumption_index for ix in all_indices]
    tis = [ix.transient_index for ix in all_indices]
    return IndexSummary(
        (min(pis), max(pis)), (min(cis), max(cis)), (min(tis), max(tis)), len(all_indices)
    )


def normalize_cs_pnt(g: Grammar) -> Grammar:
    """Split every terminal-increasing context rule αVβ→φ into αVβ→C and
    C→φ with a fresh non-terminal C, turning the producer context-free.

    Fresh names are C1, C2, … in production order; a clash with an existing
    name gets apostrophes appended.  Grammars without such rules are
    returned unchanged.  The transformation is idempotent: the rewritten
    rule αVβ→C no longer increases the terminal count, and C→φ has a
    single-symbol lhs, so a second pass finds nothing to split.
    """
    needs = [p for p in g.productions if len(p.lhs) > 1 and p.terminal_delta() > 0]
    if not needs:
        return g

    taken = {s.name for s in g.alphabet}
    new_nts = set(g.nonterminals)
    rules: list[tuple[tuple[Symbol, ...], tuple[Symbol, ...]]] = []
    ordinal = 0
    for p in g.productions:
        if len(p.lhs) > 1 and p.terminal_delta() > 0:
            ordinal += 1
            name = f"C{ordinal}"
            while name in taken:
                name += "'"
            taken.add(name)
            fresh = nonterminal(name)
            new_nts.add(fresh)
            rules.append((p.lhs, (fresh,)))
            rules.append(((fresh,), p.rhs))
        else:
            rules.append((p.lhs, p.rhs))

    out = Grammar(
        name=g.name,
        terminals=g.terminals,
        nonterminals=frozenset(new_nts),
        start=g.start,
        productions=tuple(Production(lhs, rhs, i) for i, (lhs, rhs) in enumerate(rules)),
    )
    problems = validate_grammar(out)
    if problems:  # cannot happen for a valid input grammar
        raise AssertionError(f"normalization produced an invalid grammar: {problems}")
    return out


def report_to_json(report: ClassificationReport) -> dict:
    lim = report.verdict.limits
    evidence_json: dict[str, dict[str, list[int]]] = {}
    for s, ev in report.evidence.items():
        flags = {}
        if ev.pnt_cf is not None:
            flags["pnt_cf"] = list(ev.pnt_cf)
        if ev.pnt_cs is not None:
            flags["pnt_cs"] = list(ev.pnt_cs)
        if ev.cnt is not None:
            flags["cnt"] = list(ev.cnt)
        evidence_json[s.name] = flags
    summary = report.index_summary
    return {
        "roles": {s.name: list(f.names()) for s, f in report.roles.items()},
        "evidence": evidence_json,
        "verdict": report.verdict.kind.value,
        "limits": {
            "max_steps": lim.max_steps,
            "max_form_len": lim.max_form_len,
            "max_visited": lim.max_visited,
            "max_string_len": lim.max_string_len,
        },
        "index_summary": None if summary is None else {
            "pi": list(summary.pi),
            "ci": list(summary.ci),
            "ti": list(summary.ti),
        },
    }
