"""Pushdown simulator: `.pda` parsing, runs, configuration languages."""

import dataclasses

import pytest
from hypothesis import given, strategies as st

from fgw.pda import (
    PARENS_PDA,
    PARENS_PDA_SOURCE,
    AcceptMode,
    ConfigLanguage,
    PdaError,
    PdaSpec,
    PdaTransition,
    config_language,
    parse_pda,
    pda_run,
    render_stack,
    run_to_json,
)

from _oracles import balanced_parens


def run_parens(word, **kw):
    return pda_run(PARENS_PDA, tuple(word), **kw)


LOOP_PDA = parse_pda(
    "states: q\nstart: q\naccept: q\ninput: a\nstack: x\nmode: final\n"
    "q, eps, eps -> q, push x\n"
)


# ----------------------------------------------------------------- parsing


def test_parse_builtin():
    spec = PARENS_PDA
    assert spec.states == frozenset({"q"})
    assert spec.accepting_states == frozenset({"q"})
    assert spec.input_alphabet == frozenset({"(", ")"})
    assert spec.stack_alphabet == frozenset({"("})
    assert spec.start_state == "q"
    assert spec.acceptance_mode is AcceptMode.BOTH
    assert spec.initial_stack == ()
    assert spec.transitions == (
        PdaTransition("q", "(", None, "q", ("(",)),
        PdaTransition("q", ")", "(", "q", ()),
    )


def test_parse_ignores_comments_and_blanks():
    spec = parse_pda("# header\n\n" + PARENS_PDA_SOURCE + "\n# trailing\n")
    assert spec == PARENS_PDA


def test_parse_repeated_set_headers_union():
    spec = parse_pda(
        "states: q\nstates: r\nstart: q\naccept: r\ninput: a\nstack: x\nmode: final\n"
    )
    assert spec.states == frozenset({"q", "r"})
    assert spec.transitions == ()


def test_parse_without_transitions_is_valid():
    spec = parse_pda("states: q\nstart: q\naccept: q\ninput:\nstack:\nmode: empty\n")
    assert pda_run(spec, ()).accepted


@pytest.mark.parametrize(
    "source,fragment,line",
    [
        ("start: q\nmode: both\n", "missing states", None),
        ("states: q\nmode: both\n", "missing start", None),
        ("states: q\nstart: q\n", "missing mode", None),
        ("states: q\nstart: q\nstart: q\nmode: both\n", "duplicate start", 3),
        ("states: q\nstart: q\nmode: both\nmode: both\n", "duplicate mode", 4),
        ("states: q\nstart: q\nmode: sometimes\n", "unknown mode", 3),
        ("states: q\nstart: r\nmode: both\n", "not declared", None),
        ("states: q\nstart: q\naccept: r\nmode: both\n", "accepting states not declared", None),
        ("states: q\nstart: q\nmode: both\nq, a -> q, push eps\n", "left side", 4),
        ("states: q\nstart: q\nmode: both\nq, a, eps -> q\n", "right side", 4),
        ("states: q\nstart: q\nmode: both\nq, a, eps, q, push eps\n", "exactly one '->'", 4),
        ("states: q\nstart: q\nmode: both\nr, eps, eps -> q, push eps\n", "unknown state 'r'", 4),
        ("states: q\nstart: q\nmode: both\nq, eps, eps -> r, push eps\n", "unknown state 'r'", 4),
        ("states: q\nstart: q\nmode: both\nq, a, eps -> q, push eps\n", "input symbol 'a'", 4),
        ("states: q\nstart: q\nmode: both\nq, eps, x -> q, push eps\n", "stack symbol 'x'", 4),
        ("states: q\nstart: q\nmode: both\nq, eps, eps -> q, pop\n", "push", 4),
        ("states: q\nstart: q\nmode: both\nq, eps, eps -> q, push\n", "push needs tokens", 4),
        ("states: q\nstart: q\nmode: both\nq, eps, eps -> q, push y\n", "push symbols not declared", 4),
    ],
)
def test_parse_errors(source, fragment, line):
    with pytest.raises(PdaError, match=fragment) as exc:
        parse_pda(source)
    assert exc.value.line == line


def test_parse_error_message_carries_line_number():
    with pytest.raises(PdaError, match="line 4"):
        parse_pda("states: q\nstart: q\nmode: both\nq, a -> q, push eps\n")


# -------------------------------------------------------------------- runs


def test_run_balanced_word():
    r = run_parens("(())")
    assert r.accepted and not r.inconclusive
    assert r.configs == frozenset({(), ("(",), ("(", "(")})


def test_run_unbalanced_words():
    assert not run_parens("())").accepted
    assert not run_parens("(").accepted
    assert not run_parens(")").accepted
    assert run_parens(")").configs == frozenset({()})


def test_run_empty_input():
    r = run_parens("")
    assert r.accepted
    assert r.configs == frozenset({()})


def test_run_rejects_foreign_tokens():
    with pytest.raises(PdaError, match="not in the alphabet"):
        run_parens("(a)")


def test_run_rejects_bad_step_limit():
    with pytest.raises(PdaError, match="strictly positive"):
        run_parens("()", step_limit=0)


def test_run_step_limit_marks_inconclusive():
    r = pda_run(LOOP_PDA, (), step_limit=5)
    assert r.inconclusive
    assert r.accepted  # the initial configuration already accepts
    assert all(all(t == "x" for t in c) for c in r.configs)
    full = pda_run(LOOP_PDA, (), step_limit=50)
    assert r.configs <= full.configs


def test_run_nondeterministic_choice_accepts_if_any_path_does():
    spec = parse_pda(
        "states: q r\nstart: q\naccept: r\ninput: a\nstack: x\nmode: final\n"
        "q, a, eps -> q, push x\n"
        "q, a, eps -> r, push eps\n"
    )
    r = pda_run(spec, ("a",))
    assert r.accepted
    assert r.configs == frozenset({(), ("x",)})


def test_run_initial_stack_is_recorded():
    spec = dataclasses.replace(PARENS_PDA, initial_stack=("(",))
    r = pda_run(spec, ())
    assert not r.accepted  # stack is not empty at the end
    assert ("(",) in r.configs
    assert pda_run(spec, (")",)).accepted


def test_acceptance_modes_disagree_exactly_on_leftover_stack():
    word = tuple("(()")
    by_mode = {
        mode: pda_run(dataclasses.replace(PARENS_PDA, acceptance_mode=mode), word).accepted
        for mode in AcceptMode
    }
    assert by_mode == {
        AcceptMode.FINAL_STATE: True,
        AcceptMode.EMPTY_STACK: False,
        AcceptMode.BOTH: False,
    }


def test_acceptance_modes_agree_on_balanced_words():
    for word in sorted(balanced_parens(6)):
        results = {
            pda_run(dataclasses.replace(PARENS_PDA, acceptance_mode=mode), tuple(word)).accepted
            for mode in AcceptMode
        }
        assert results == {True}, word


# ---------------------------------------------------------- config language


def test_config_language_union():
    lang = config_language(PARENS_PDA, [tuple("()"), tuple("(())")])
    assert lang.configs == frozenset({(), ("(",), ("(", "(")})
    assert lang.inconclusive_inputs == ()


def test_config_language_balanced_up_to_six():
    words = [tuple(w) for w in sorted(balanced_parens(6))]
    assert len(words) == 9
    lang = config_language(PARENS_PDA, words)
    assert lang.configs == frozenset({(), ("(",), ("(", "("), ("(", "(", "(")})


def test_config_language_prefix_closed_and_pure():
    words = [tuple(w) for w in sorted(balanced_parens(8))]
    lang = config_language(PARENS_PDA, words)
    for c in lang.configs:
        assert all(t == "(" for t in c)
        assert c[:-1] in lang.configs or c == ()


def test_config_language_reports_inconclusive_inputs():
    lang = config_language(LOOP_PDA, [("a",), ()], step_limit=5)
    assert lang.inconclusive_inputs == (("a",), ())


@given(st.integers(0, 3), st.integers(0, 3))
def test_mismatched_words_rejected(opens, extra):
    word = "(" * opens + ")" * (opens + extra + 1)
    assert not run_parens(word).accepted


@given(st.lists(st.sampled_from(["()", "(())", "()()"]), max_size=4))
def test_concatenations_of_balanced_words_accepted(parts):
    assert run_parens("".join(parts)).accepted


# -------------------------------------------------------------- rendering


def test_render_stack():
    assert render_stack(()) == "ε"
    assert render_stack(("(", "(")) == "(("
    assert render_stack(("X1", "Y2")) == "X1 Y2"


def test_run_to_json_shape():
    data = run_to_json(run_parens("(())"))
    assert data == {
        "accepted": True,
        "inconclusive": False,
        "configs": ["", "(", "(("],
    }


def test_run_is_deterministic():
    assert run_parens("(()())") == run_parens("(()())")
    assert config_language(PARENS_PDA, [tuple("()")]) == ConfigLanguage(
        frozenset({(), ("(",)}), ()
    )
