"""Grammar model, .grm parsing, validation, and serialization."""

import pytest
from hypothesis import given, strategies as st

from fgw.corpus import CORPUS_IDS, load_corpus
from fgw.grammar import (
    EPSILON,
    Grammar,
    GrammarError,
    GrammarSyntaxError,
    GrammarValidationError,
    Production,
    Symbol,
    SymbolKind,
    compact_tokens,
    is_terminal_form,
    nonterminal,
    parse_form,
    parse_grammar,
    render_form,
    serialize_grammar,
    terminal,
    terminal_count,
    validate_grammar,
)


def test_symbol_basics():
    a = terminal("a")
    s = nonterminal("S")
    assert a.is_terminal and not s.is_terminal
    assert str(a) == "a"
    assert a != terminal("b")
    assert a != nonterminal("a")  # same name, different kind


@pytest.mark.parametrize("bad", ["", "a b", "->", "|", "eps", "#", "x\ty"])
def test_symbol_rejects_bad_names(bad):
    with pytest.raises(GrammarError):
        terminal(bad)


def test_form_helpers():
    a, s = terminal("a"), nonterminal("S")
    assert is_terminal_form((a, a)) and not is_terminal_form((a, s))
    assert is_terminal_form(())
    assert terminal_count((a, s, a)) == 2
    assert render_form(()) == EPSILON
    assert render_form((a, s)) == "a S"
    assert compact_tokens(["a", "b"]) == "ab"
    assert compact_tokens(["a", "BB"]) == "a BB"
    assert compact_tokens([]) == EPSILON


def test_production_delta_and_str():
    a, p, q = terminal("a"), nonterminal("P"), nonterminal("Q")
    prod = Production((a, q), (q,), 0)
    assert prod.terminal_delta() == -1
    assert str(prod) == "a Q -> Q"
    assert str(Production((p, q), (), 1)) == "P Q -> eps"


def test_parse_minimal_grammar():
    g = parse_grammar("start: S\nterminals: a\nS -> a S | eps\n")
    assert g.start == nonterminal("S")
    assert g.terminals == frozenset({terminal("a")})
    assert [str(p) for p in g.productions] == ["S -> a S", "S -> eps"]
    assert [p.index for p in g.productions] == [0, 1]


def test_parse_comments_blank_lines_and_repeated_terminals():
    g = parse_grammar(
        "# top comment\nname: demo\nterminals: a\nstart: S\n\nterminals: b\nS -> a b\n"
    )
    assert g.name == "demo"
    assert {s.name for s in g.terminals} == {"a", "b"}


def test_parse_empty_terminals_header():
    g = parse_grammar("start: S\nterminals:\nS -> eps\n")
    assert g.terminals == frozenset()
    assert g.productions[0].rhs == ()


@pytest.mark.parametrize(
    "source, fragment",
    [
        ("terminals: a\nS -> a\n", "missing 'start:'"),
        ("start: S\nS -> a\n", "missing 'terminals:'"),
        ("start: S\nstart: S\nterminals: a\nS -> a\n", "duplicate"),
        ("start:S\nterminals: a\nS -> a\n", "whitespace"),
        ("start: S\nterminals: a\nS -> a -> b\n", "more than one"),
        ("start: S\nterminals: a\n-> a\n", "left side"),
        ("start: S\nterminals: a\nS ->\n", "empty"),
        ("start: S\nterminals: a\nS -> a | | a\n", "empty"),
        ("start: S\nterminals: a\nS -> a eps\n", "only token"),
        ("start: S\nterminals: a\neps -> a\n", "left side"),
        ("start: S\nterminals: a\na -> a a\n", "non-terminal"),
        ("start: S S\nterminals: a\nS -> a\n", "exactly one"),
        ("bogus: x\nstart: S\nterminals: a\nS -> a\n", "unknown header"),
    ],
)
def test_parse_errors(source, fragment):
    with pytest.raises(GrammarError) as exc:
        parse_grammar(source)
    assert fragment in str(exc.value)


def test_syntax_error_carries_position():
    with pytest.raises(GrammarSyntaxError) as exc:
        parse_grammar("start: S\nterminals: a\nS -> a -> b\n")
    assert exc.value.line == 3
    assert exc.value.column is not None


def test_validate_grammar_reports_all_problems():
    a = terminal("a")
    s = nonterminal("S")
    ghost = nonterminal("Ghost")
    g = Grammar(
        name="broken",
        terminals=frozenset({a}),
        nonterminals=frozenset({s}),
        start=ghost,
        productions=(Production((a,), (a,), 0), Production((s,), (s,), 5)),
    )
    problems = validate_grammar(g)
    assert any("start" in p for p in problems)
    assert any("index" in p for p in problems)
    assert any("non-terminal" in p for p in problems)


def test_corpus_all_parse_and_validate():
    for name in CORPUS_IDS:
        g = load_corpus(name)
        assert validate_grammar(g) == []
        assert g.name == name


def test_corpus_production_counts():
    expected = {
        "G1": 10, "G2": 5, "G3": 1, "G3b": 2, "STACK": 5, "DEQUE": 7,
        "PRIORITY": 14, "PRIORITY_AS_PRINTED": 14, "G4": 11, "G5": 11, "PARENS": 4,
    }
    for name, count in expected.items():
        assert len(load_corpus(name).productions) == count, name


def test_unknown_corpus_id():
    from fgw.corpus import corpus_source
    with pytest.raises(GrammarError, match="unknown corpus id"):
        corpus_source("NOPE")


def test_parse_form_variants():
    g = load_corpus("G1")
    spaced = parse_form(g, "a a b a a b")
    packed = parse_form(g, "aabaab")
    assert spaced == packed
    assert parse_form(g, "eps") == ()
    assert parse_form(g, "ε") == ()
    assert parse_form(g, "") == ()
    assert parse_form(g, "aAS") == parse_form(g, "a A S")
    with pytest.raises(GrammarError, match="unknown symbol"):
        parse_form(g, "axz")


def test_serialize_round_trips_corpus():
    for name in CORPUS_IDS:
        g = load_corpus(name)
        assert parse_grammar(serialize_grammar(g)) == g


# --- random-grammar round-trip -------------------------------------------

_TERMINALS = st.sampled_from(["a", "b", "c"])
_NONTERMS = st.sampled_from(["S", "A", "B", "C0"])


@st.composite
def grammars(draw):
    terms = {terminal(n) for n in draw(st.sets(_TERMINALS, min_size=1, max_size=3))}
    term_list = sorted(terms, key=lambda s: s.name)
    nts = [nonterminal(n) for n in sorted(draw(st.sets(_NONTERMS, min_size=1, max_size=4)))]
    start = draw(st.sampled_from(nts))
    symbols = term_list + nts

    def side(min_size):
        return st.lists(st.sampled_from(symbols), min_size=min_size, max_size=3).map(tuple)

    n_rules = draw(st.integers(1, 5))
    productions = []
    for i in range(n_rules):
        lhs = draw(side(1))
        if not any(not s.is_terminal for s in lhs):
            lhs = lhs + (draw(st.sampled_from(nts)),)
        productions.append(Production(lhs, draw(side(0)), i))
    used_nts = {s for p in productions for s in p.lhs + p.rhs if not s.is_terminal}
    used_nts.add(start)
    return Grammar(
        name=draw(st.sampled_from(["g", "demo", "rt1"])),
        terminals=frozenset(terms),
        nonterminals=frozenset(used_nts),
        start=start,
        productions=tuple(productions),
    )


@given(grammars())
def test_serialize_parse_round_trip(g):
    assert validate_grammar(g) == []
    assert parse_grammar(serialize_grammar(g)) == g


@given(grammars())
def test_symbols_by_name_covers_alphabet(g):
    for s in g.alphabet:
        assert g.symbol(s.name) == s
    with pytest.raises(GrammarError):
        g.symbol("no_such_symbol")
