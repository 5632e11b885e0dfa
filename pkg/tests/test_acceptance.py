"""End-to-end acceptance checks, one per criterion.

Run ``pytest tests/test_acceptance.py -v -s`` to get one [PASS]/[FAIL] line
per criterion.  Every check pins its limits and seeds, so the whole module is
reproducible; expensive artifacts (enumerations, random-walk pools, seeded
trace sets) are shared through module-scoped fixtures.
"""

import dataclasses
import itertools
from contextlib import contextmanager
from random import Random

import pytest

from fgw.classify import Verdict, classify_all, normalize_cs_pnt
from fgw.corpus import CORPUS_IDS, load_corpus
from fgw.engine import (
    SearchLimits,
    SearchStatus,
    bfs_derive,
    constrained_derive,
    enumerate_forms,
    enumerate_language,
    find_matches,
    replay_trace,
    trace_indices,
)
from fgw.grammar import parse_form, parse_grammar
from fgw.pda import PARENS_PDA, AcceptMode, config_language, pda_run
from fgw.structure import (
    BufferOp,
    Discipline,
    check_priority_discipline,
    classify_buffer_ops,
    classify_discipline,
    find_priority_witness,
    seeded_traces,
)

from _oracles import (
    balanced_parens,
    brute_force_matches,
    bstar_astar,
    random_partial_walk,
    terminal_count_by_name,
    xx_language,
)

G1 = load_corpus("G1")
G2 = load_corpus("G2")
G4 = load_corpus("G4")
G5 = load_corpus("G5")
PRIORITY = load_corpus("PRIORITY")

HOST = parse_grammar(
    "name: host\nstart: S\nterminals: a b\nS -> a A\na A -> b b A\nb A -> A\n"
)


@contextmanager
def criterion(num: int, desc: str):
    try:
        yield
    except BaseException:
        print(f"\n[FAIL] criterion {num:2d}: {desc}")
        raise
    print(f"\n[PASS] criterion {num:2d}: {desc}")


def words(lang):
    return {"".join(key) for key in lang.strings}


# ----------------------------------------------------------- shared artifacts


@pytest.fixture(scope="module")
def g1_language():
    return enumerate_language(
        G1, SearchLimits(max_steps=60, max_form_len=16, max_string_len=8)
    )


@pytest.fixture(scope="module")
def walk_pool():
    """1100 seeded partial walks (100 per corpus grammar), with their grammars."""
    pool = []
    for cid in CORPUS_IDS:
        g = load_corpus(cid)
        pool.extend((g, random_partial_walk(g, seed)) for seed in range(100))
    return pool


@pytest.fixture(scope="module")
def discipline_traces():
    return {cid: seeded_traces(load_corpus(cid), 50) for cid in ("G2", "STACK", "DEQUE")}


# ---------------------------------------------------------------- criteria


def test_criterion_01_g1_language_is_doubling(g1_language):
    with criterion(1, "G1 bounded language == {xx : |x| <= 4} (31 strings, exact)"):
        assert words(g1_language) == xx_language(4)
        assert len(g1_language.strings) == 31


def test_criterion_02_g1_targeted_derivation():
    with criterion(2, "G1 derives aabaab; the trace replays to the target"):
        target = parse_form(G1, "aabaab")
        out = bfs_derive(G1, target, SearchLimits(max_steps=40, max_form_len=14))
        assert out.status is SearchStatus.FOUND
        assert replay_trace(G1, out.trace) == target


def test_criterion_03_g2_nullity_and_form_shape():
    with criterion(3, "G2 strings == {ε}; every form <= 10 is S, ε, or P a^n Q (n <= 8)"):
        lang = enumerate_language(G2, SearchLimits(max_string_len=4))
        assert set(lang.strings) == {()}

        forms = enumerate_forms(G2, SearchLimits(max_form_len=10))
        seen_n = set()
        for f in forms:
            names = tuple(s.name for s in f)
            if names in ((), ("S",)):
                continue
            assert names[0] == "P" and names[-1] == "Q", names
            body = names[1:-1]
            assert all(x == "a" for x in body), names
            seen_n.add(len(body))
        assert seen_n == set(range(9))


def test_criterion_04_disciplines(discipline_traces):
    with criterion(4, "seeded traces: G2 -> Queue, STACK -> Stack, DEQUE -> Deque"):
        expected = {"G2": Discipline.QUEUE, "STACK": Discipline.STACK, "DEQUE": Discipline.DEQUE}
        for cid, want in expected.items():
            g = load_corpus(cid)
            traces = discipline_traces[cid]
            assert len(traces) == 50, cid
            verdict = classify_discipline(g, g.symbol("P"), g.symbol("Q"), traces)
            assert verdict.verdict is want, (cid, verdict.verdict)


def test_criterion_05_priority_witness_and_as_printed_language():
    with criterion(5, "PRIORITY has a reordering, priority-respecting complete "
                      "derivation (B>A); as-printed variant's bounded language "
                      "is {ε} as well (no difference to report)"):
        left, right = PRIORITY.symbol("P"), PRIORITY.symbol("Q")
        order = [PRIORITY.symbol("B"), PRIORITY.symbol("A")]
        got = find_priority_witness(PRIORITY, left, right, order, require_reorder=True)
        assert got is not None
        seed, trace = got
        assert check_priority_discipline(trace, left, right, order).ok
        ops = classify_buffer_ops(PRIORITY, trace, left, right)
        assert any(s.op is BufferOp.REORDER for s in ops)

        as_printed = enumerate_language(
            load_corpus("PRIORITY_AS_PRINTED"),
            SearchLimits(max_steps=24, max_form_len=10, max_string_len=4),
        )
        assert words(as_printed) == {""}


def test_criterion_06_g4_g5_language_equality():
    with criterion(6, "G4 and G5 strings <= 6 == {b^i a^j : i+j <= 6} (28 strings)"):
        oracle = bstar_astar(6)
        lang4 = enumerate_language(G4, SearchLimits(max_string_len=6))
        lang5 = enumerate_language(
            G5, SearchLimits(max_steps=45, max_form_len=10, max_string_len=6)
        )
        assert words(lang4) == oracle
        assert words(lang5) == oracle
        assert len(oracle) == 28


def test_criterion_07_injection_order_sorting():
    with criterion(7, "all 10 injection orders of {a,a,a,b,b} reach bbaaa via G5/N"):
        injector = G5.symbol("N")
        target = parse_form(G5, "bbaaa")
        lim = SearchLimits(max_steps=45, max_form_len=10)
        orders = {"".join(p) for p in itertools.permutations("aabba")}
        assert len(orders) == 10 and "aabba" in orders
        for text in sorted(orders):
            out = constrained_derive(G5, injector, parse_form(G5, text), target, lim)
            assert out.status is SearchStatus.FOUND, text


def test_criterion_08_classification_golden_table():
    with criterion(8, "role table and verdicts match the golden classification"):
        rep = classify_all(G2)
        assert {s.name: f.names() for s, f in rep.roles.items()} == {
            "P": ("pnt_cf",), "Q": ("cnt",), "S": ("pnt_cf",)
        }

        host_roles = {s.name: f.names() for s, f in classify_all(HOST).roles.items()}
        assert host_roles["A"] == ("pnt_cs", "cnt")

        normalized = normalize_cs_pnt(HOST)
        n_roles = {s.name: f.names() for s, f in classify_all(normalized).roles.items()}
        assert n_roles["C1"] == ("pnt_cf",)
        assert "pnt_cs" not in n_roles["A"]

        verdicts = {
            "G3": (Verdict.PURE_NULL, SearchLimits()),
            "G2": (Verdict.PURELY_FUNCTIONAL, SearchLimits()),
            "STACK": (Verdict.PURELY_FUNCTIONAL, SearchLimits()),
            "DEQUE": (Verdict.PURELY_FUNCTIONAL, SearchLimits()),
            "G1": (Verdict.FUNCTIONAL,
                   SearchLimits(max_steps=40, max_form_len=12, max_string_len=4)),
            "G4": (Verdict.FUNCTIONAL, SearchLimits(max_string_len=3)),
            "G5": (Verdict.FUNCTIONAL,
                   SearchLimits(max_steps=30, max_form_len=10, max_string_len=4)),
            "PARENS": (Verdict.FUNCTIONAL,
                       SearchLimits(max_steps=30, max_form_len=12, max_string_len=4)),
        }
        for cid, (want, lim) in verdicts.items():
            got = classify_all(load_corpus(cid), lim).verdict.kind
            assert got is want, (cid, got)


def test_criterion_09_index_identities(walk_pool, discipline_traces):
    with criterion(9, "PI - CI equals the terminal-count change on 1100 random "
                      "traces; complete G2/STACK/DEQUE derivations have TI=0, PI=CI"):
        assert len(walk_pool) >= 1000
        for g, t in walk_pool:
            ix = trace_indices(g, t)
            delta = terminal_count_by_name(g, t.final) - terminal_count_by_name(g, t.initial)
            assert ix.production_index - ix.consumption_index == delta
            assert ix.transient_index == delta

        for cid, traces in discipline_traces.items():
            g = load_corpus(cid)
            complete = list(traces)
            complete.extend(enumerate_language(g, SearchLimits(max_string_len=4)).strings.values())
            assert complete
            for t in complete:
                ix = trace_indices(g, t)
                assert ix.transient_index == 0, cid
                assert ix.production_index == ix.consumption_index, cid


def test_criterion_10_normalization_preserves_language():
    with criterion(10, "host grammar language <= 6 unchanged by producer "
                       "normalization (both definitively empty)"):
        lim = SearchLimits(max_string_len=6, max_steps=64)
        doubled = SearchLimits(max_string_len=6, max_steps=128)
        before = enumerate_language(HOST, lim)
        after = enumerate_language(normalize_cs_pnt(HOST), doubled)
        assert not before.pruned and not after.pruned
        assert set(before.strings) == set(after.strings) == set()


def test_criterion_11_pda_configuration_language():
    with criterion(11, "stack configs over balanced words <= 6 are a subset of "
                       "(* and include ε ( (( (((; final and empty acceptance agree"):
        inputs = [tuple(w) for w in sorted(balanced_parens(6), key=lambda w: (len(w), w))]
        assert len(inputs) == 9
        lang = config_language(PARENS_PDA, inputs)
        assert lang.inconclusive_inputs == ()
        assert all(all(tok == "(" for tok in c) for c in lang.configs)
        required = {(), ("(",), ("(", "("), ("(", "(", "(")}
        assert required <= lang.configs

        for word in inputs:
            by_final = pda_run(
                dataclasses.replace(PARENS_PDA, acceptance_mode=AcceptMode.FINAL_STATE), word
            ).accepted
            by_empty = pda_run(
                dataclasses.replace(PARENS_PDA, acceptance_mode=AcceptMode.EMPTY_STACK), word
            ).accepted
            assert by_final == by_empty, word


def test_criterion_12_engine_soundness(g1_language, walk_pool):
    with criterion(12, "matching == brute force on 1000 forms; all traces replay; "
                       "definitive negatives survive limit doubling"):
        pool = sorted(
            {(g.name, f) for g, t in walk_pool for f in t.forms()},
            key=lambda pair: (pair[0], len(pair[1]), tuple(s.name for s in pair[1])),
        )
        assert len(pool) >= 1000
        by_name = {g.name: g for g, _ in walk_pool}
        sample = Random(0).sample(pool, 1000)
        for name, form in sample:
            g = by_name[name]
            ours = [(m.production_index, m.position) for m in find_matches(g, form)]
            assert ours == brute_force_matches(g, form), (name, form)

        for key, trace in g1_language.strings.items():
            assert tuple(s.name for s in replay_trace(G1, trace)) == key
        for g, t in walk_pool:
            assert replay_trace(g, t) == t.final

        lim = SearchLimits(max_steps=30, max_form_len=10)
        double = SearchLimits(max_steps=60, max_form_len=20,
                              max_visited=4_000_000, max_string_len=16)
        ba, ab = parse_form(G5, "ba"), parse_form(G5, "ab")
        injector = G5.symbol("N")
        assert constrained_derive(G5, injector, ba, ab, lim).status \
            is SearchStatus.EXHAUSTED_COMPLETE
        assert constrained_derive(G5, injector, ba, ab, double).status \
            is SearchStatus.EXHAUSTED_COMPLETE
        host_target = parse_form(HOST, "a")
        assert bfs_derive(HOST, host_target, lim).status is SearchStatus.EXHAUSTED_COMPLETE
        assert bfs_derive(HOST, host_target, double).status is SearchStatus.EXHAUSTED_COMPLETE
