"""Built-in grammar corpus shared by the tests, the docs, and the CLI."""

from __future__ import annotations

from .grammar import Grammar, GrammarError, parse_grammar

_SOURCES: dict[str, str] = {
    "G1": """\
name: G1
# String doubler: generates exactly the words xx for x over {a, b}.
# Each injected letter leaves behind an uppercase marker that commutes
# rightward and re-emits the letter past T, building the second copy.
start: S
terminals: a b
S -> a A S | b B S | T
A a -> a A
B a -> a B
A b -> b A
B b -> b B
B T -> T b
A T -> T a
T -> eps
""",
    "G2": """\
name: G2
# Queue of a's held between P and Q: P enqueues at the left end,
# Q dequeues at the right end.  Only the empty word ever terminates.
start: S
terminals: a
S -> P Q | eps
P -> P a
a Q -> Q
P Q -> eps
""",
    "G3": """\
name: G3
# Smallest grammar with an empty-word-only language.
start: S
terminals:
S -> eps
""",
    "G3b": """\
name: G3b
# Like G3 but with one indirection before the empty word.
start: S
terminals:
S -> A
A -> eps
""",
    "STACK": """\
name: STACK
# Unbounded stack of a's: both push and pop happen at the P end.
start: S
terminals: a
S -> P Q | eps
P -> P a
P a -> P
P Q -> eps
""",
    "DEQUE": """\
name: DEQUE
# Double-ended queue of a's: insert and delete at either delimiter.
start: S
terminals: a
S -> P Q | eps
P -> P a
Q -> a Q
P a -> P
a Q -> Q
P Q -> eps
""",
    "PRIORITY": """\
name: PRIORITY
# Two-symbol buffer between P and Q with a reorder rule A B -> B A,
# so B (the higher-priority symbol) can drift toward either end and be
# served first.  Inserts and deletes happen at both delimiters.
start: S
terminals: a b
S -> P Q | eps
P -> P A | P B
Q -> A Q | B Q
P A -> P
P B -> P
A Q -> Q
B Q -> Q
A B -> B A
P Q -> eps
A -> a
B -> b
""",
    "PRIORITY_AS_PRINTED": """\
name: PRIORITY_AS_PRINTED
# Variant of PRIORITY that keeps the rule B Q -> B instead of B Q -> Q.
# That rule destroys the right delimiter, so any derivation using it can
# never finish; kept in the corpus for side-by-side comparison.
start: S
terminals: a b
S -> P Q | eps
P -> P A | P B
Q -> A Q | B Q
P A -> P
P B -> P
A Q -> Q
B Q -> B
A B -> B A
P Q -> eps
A -> a
B -> b
""",
    "G4": """\
name: G4
# Regular grammar for b* a*: b's first, then a's.
start: S
terminals: a b
S -> b B | a C | a | b | eps
B -> b B | a C | a | b
C -> a C | a
""",
    "G5": """\
name: G5
# Rewriting sorter for b* a*: N injects a's and b's in any order between
# P and Q; the machinery around Q, R, and the A/B markers emits every b
# before every a, so the language equals G4's.
start: S
terminals: a b
S -> P N Q R
N -> N a | N b | eps
a Q -> Q A
b Q -> Q B
P Q -> P
P B -> b P
A R -> R a
A B -> B A
P R -> eps
""",
    "PARENS": """\
name: PARENS
# Balanced parentheses built by wrapping or by affixing () at either side.
start: S
terminals: ( )
S -> ( S ) | ( ) S | S ( ) | eps
""",
}

#: Short one-line descriptions, keyed like _SOURCES; used by ``fgw corpus list``.
DESCRIPTIONS: dict[str, str] = {
    "G1": "string doubler; language {xx : x in {a,b}*}",
    "G2": "queue of a's between P and Q; language {eps}",
    "G3": "one-rule empty-word grammar",
    "G3b": "empty-word grammar with one indirection",
    "STACK": "stack of a's (insert and delete at the left delimiter)",
    "DEQUE": "double-ended queue of a's (both delimiters active)",
    "PRIORITY": "two-symbol buffer with reorder rule; B outranks A",
    "PRIORITY_AS_PRINTED": "PRIORITY variant keeping B Q -> B (never terminates through it)",
    "G4": "regular grammar for b* a*",
    "G5": "rewriting sorter with the same language as G4",
    "PARENS": "balanced-parenthesis generator",
}

CORPUS_IDS: tuple[str, ...] = tuple(_SOURCES)


def corpus_source(name: str) -> str:
    """Raw .grm text of a corpus grammar."""
    try:
        return _SOURCES[name]
    except KeyError:
        known = ", ".join(CORPUS_IDS)
        raise GrammarError(f"unknown corpus id {name!r} (known: {known})") from None


def load_corpus(name: str) -> Grammar:
    return parse_grammar(corpus_source(name))
