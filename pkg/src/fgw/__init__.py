"""Workbench for unrestricted rewriting grammars: a semi-Thue derivation
engine with bounded search, non-terminal role classification, buffer-
discipline analysis of derivation traces, and a small PDA simulator."""

from .classify import (
    ClassificationReport,
    Verdict,
    classify_all,
    classify_cf_pnt,
    classify_cnt,
    classify_cs_pnt,
    normalize_cs_pnt,
)
from .corpus import CORPUS_IDS, load_corpus
from .engine import (
    DerivationStep,
    DerivationTrace,
    LanguageEnumeration,
    Match,
    ReplayError,
    RewriteError,
    SearchLimits,
    SearchOutcome,
    SearchStatus,
    TraceIndices,
    apply_at,
    bfs_derive,
    constrained_derive,
    enumerate_forms,
    enumerate_language,
    find_matches,
    replay_trace,
    successors,
    trace_from_json,
    trace_indices,
    trace_to_json,
)
from .grammar import (
    Grammar,
    GrammarError,
    GrammarSyntaxError,
    GrammarValidationError,
    Production,
    Symbol,
    nonterminal,
    parse_form,
    parse_grammar,
    serialize_grammar,
    terminal,
    validate_grammar,
)
from .pda import PARENS_PDA, AcceptMode, PdaSpec, config_language, parse_pda, pda_run
from .structure import (
    BufferOp,
    Discipline,
    check_priority_discipline,
    classify_buffer_ops,
    classify_discipline,
    classify_step,
    extract_buffer_trace,
    find_priority_witness,
    random_complete_trace,
    seeded_traces,
)

__version__ = "0.1.0"
