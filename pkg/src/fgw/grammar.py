"""Symbols, productions, grammars, and the ``.grm`` text format.

Grammars here are fully unrestricted: a production may rewrite any symbol
sequence, as long as its left side contains at least one non-terminal.
Sentential forms are plain tuples of symbols; the empty tuple is the empty
word.  All values are immutable and hashable, parse errors carry line/column
positions, and ``validate_grammar`` reports every violated invariant instead
of stopping at the first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable

#: Tokens with structural meaning in the .grm format; never valid symbol names.
RESERVED_TOKENS = frozenset({"->", "|", "eps", "#"})

EPSILON = "ε"


class GrammarError(ValueError):
    """Base class for grammar construction, parsing, and lookup failures."""


class GrammarSyntaxError(GrammarError):
    """A .grm source line that does not scan; carries line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        if line:
            super().__init__(f"line {line}, column {column}: {message}")
        else:
            super().__init__(message)
        self.line = line
        self.column = column


class GrammarValidationError(GrammarError):
    """A structurally well-formed grammar that violates its invariants."""

    def __init__(self, violations: Iterable[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class SymbolKind(Enum):
    TERMINAL = "terminal"
    NONTERMINAL = "nonterminal"


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: SymbolKind

    def __post_init__(self):
        if not self.name or self.name in RESERVED_TOKENS:
            raise GrammarError(f"invalid symbol name {self.name!r}")
        if any(ch.isspace() for ch in self.name):
            raise GrammarError(f"symbol name may not contain whitespace: {self.name!r}")

    @property
    def is_terminal(self) -> bool:
        return self.kind is SymbolKind.TERMINAL

    def __str__(self) -> str:
        return self.name


def terminal(name: str) -> Symbol:
    return Symbol(name, SymbolKind.TERMINAL)


def nonterminal(name: str) -> Symbol:
    return Symbol(name, SymbolKind.NONTERMINAL)


#: A sentential form.  () is the empty word.
Form = tuple[Symbol, ...]


def is_terminal_form(form: Form) -> bool:
    return all(s.is_terminal for s in form)


def terminal_count(form: Iterable[Symbol]) -> int:
    return sum(1 for s in form if s.is_terminal)


def render_form(form: Form) -> str:
    """Space-separated symbol names; the empty form renders as ε."""
    return " ".join(s.name for s in form) if form else EPSILON


def compact_tokens(names: Iterable[str]) -> str:
    """Join token names without spaces when every token is one character.

    Used to show terminal strings like ``aabaab`` instead of ``a a b a a b``.
    """
    names = list(names)
    if not names:
        return EPSILON
    if all(len(n) == 1 for n in names):
        return "".join(names)
    return " ".join(names)


@dataclass(frozen=True)
class Production:
    """One rewrite rule: replace an occurrence of ``lhs`` by ``rhs``.

    ``index`` is the rule's ordinal position in its grammar, used by matches,
    traces, and classification evidence.
    """

    lhs: tuple[Symbol, ...]
    rhs: tuple[Symbol, ...]
    index: int

    def __post_init__(self):
        if not self.lhs:
            raise ValueError("production left side may not be empty")

    def terminal_delta(self) -> int:
        """Net change in terminal count caused by one application."""
        return terminal_count(self.rhs) - terminal_count(self.lhs)

    def __str__(self) -> str:
        left = " ".join(s.name for s in self.lhs)
        right = " ".join(s.name for s in self.rhs) or "eps"
        return f"{left} -> {right}"


@dataclass(frozen=True)
class Grammar:
    name: str
    terminals: frozenset[Symbol]
    nonterminals: frozenset[Symbol]
    start: Symbol
    productions: tuple[Production, ...]

    @cached_property
    def alphabet(self) -> frozenset[Symbol]:
        return self.terminals | self.nonterminals

    @cached_property
    def symbols_by_name(self) -> dict[str, Symbol]:
        return {s.name: s for s in self.alphabet}

    def symbol(self, name: str) -> Symbol:
        try:
            return self.symbols_by_name[name]
        except KeyError:
            raise GrammarError(f"grammar {self.name!r} has no symbol {name!r}") from None

    def __str__(self) -> str:
        return f"{self.name} ({len(self.productions)} productions)"


def validate_grammar(g: Grammar) -> list[str]:
    """Return every violated grammar invariant; an empty list means valid."""
    violations = []
    terminal_names = {s.name for s in g.terminals}
    nonterminal_names = {s.name for s in g.nonterminals}
    for name in sorted(terminal_names & nonterminal_names):
        violations.append(f"symbol {name!r} is declared both terminal and non-terminal")
    for s in g.terminals:
        if not s.is_terminal:
            violations.append(f"symbol {s.name!r} in the terminal set is not a terminal")
    for s in g.nonterminals:
        if s.is_terminal:
            violations.append(f"symbol {s.name!r} in the non-terminal set is not a non-terminal")
    if g.start not in g.nonterminals:
        violations.append(f"start symbol {g.start.name!r} is not a declared non-terminal")
    declared = g.terminals | g.nonterminals
    for position, p in enumerate(g.productions):
        if p.index != position:
            violations.append(f"production {position} carries index {p.index}")
        if not any(not s.is_terminal for s in p.lhs):
            violations.append(f"production {position} ({p}): left side has no non-terminal")
        undeclared = {s.name for s in (*p.lhs, *p.rhs) if s not in declared}
        for name in sorted(undeclared):
            violations.append(f"production {position} ({p}): undeclared symbol {name!r}")
    return violations


_TOKEN = re.compile(r"\S+")
_HEADERS = ("name:", "start:", "terminals:")


def _check_token(tok: str, line: int, col: int) -> str:
    if tok in RESERVED_TOKENS:
        raise GrammarSyntaxError(f"reserved token {tok!r} may not be used as a symbol", line, col)
    return tok


def parse_grammar(source: str) -> Grammar:
    """Parse the ``.grm`` text format.

    Format, line by line (``#`` starts a comment, blank lines are skipped):

    * ``name: <token>``        optional, at most once
    * ``start: <token>``       required, exactly once
    * ``terminals: <token>*``  required, repeatable; occurrences are unioned
    * ``<lhs> -> <alt> | <alt> | ...``  rule lines; each alternative becomes
      one production, in source order.  ``eps`` alone denotes the empty word.

    Tokens are whitespace-separated.  Any rule token not declared in a
    ``terminals:`` header is a non-terminal.  The parsed grammar is validated;
    violations raise :class:`GrammarValidationError`.
    """
    name = None
    start_tok = None
    terminal_decls: dict[str, None] = {}
    saw_terminals_header = False
    # (lineno, lhs tokens, alternatives), each token paired with its column
    rules: list[tuple[int, list[tuple[str, int]], list[list[tuple[str, int]]]]] = []

    for lineno, raw in enumerate(source.splitlines(), start=1):
        text = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(text)]
        if not toks:
            continue
        head, head_col = toks[0]
        if head in _HEADERS:
            values = toks[1:]
            if head == "name:":
                if name is not None:
                    raise GrammarSyntaxError("duplicate 'name:' header", lineno, head_col)
                if len(values) != 1:
                    raise GrammarSyntaxError("'name:' expects exactly one token", lineno, head_col)
                name = _check_token(values[0][0], lineno, values[0][1])
            elif head == "start:":
                if start_tok is not None:
                    raise GrammarSyntaxError("duplicate 'start:' header", lineno, head_col)
                if len(values) != 1:
                    raise GrammarSyntaxError("'start:' expects exactly one token", lineno, head_col)
                start_tok = _check_token(values[0][0], lineno, values[0][1])
            else:
                saw_terminals_header = True
                for tok, col in values:
                    terminal_decls.setdefault(_check_token(tok, lineno, col))
            continue
        if re.fullmatch(r"(name|start|terminals):\S+", head):
            raise GrammarSyntaxError("header value must be separated by whitespace", lineno, head_col)
        if head.endswith(":"):
            raise GrammarSyntaxError(f"unknown header {head!r}", lineno, head_col)

        arrow_positions = [i for i, (t, _) in enumerate(toks) if t == "->"]
        if not arrow_positions:
            raise GrammarSyntaxError("rule line has no '->'", lineno, head_col)
        if len(arrow_positions) > 1:
            _, col = toks[arrow_positions[1]]
            raise GrammarSyntaxError("rule line has more than one '->'", lineno, col)
        arrow = arrow_positions[0]
        arrow_col = toks[arrow][1]
        lhs = toks[:arrow]
        if not lhs:
            raise GrammarSyntaxError("rule has an empty left side", lineno, arrow_col)
        for tok, col in lhs:
            if tok in ("eps", "|"):
                raise GrammarSyntaxError(f"{tok!r} is not allowed in a rule left side", lineno, col)

        alternatives: list[list[tuple[str, int]]] = [[]]
        for tok, col in toks[arrow + 1:]:
            if tok == "|":
                if not alternatives[-1]:
                    raise GrammarSyntaxError("empty alternative", lineno, col)
                alternatives.append([])
            else:
                alternatives[-1].append((tok, col))
        if not alternatives[-1]:
            raise GrammarSyntaxError("empty alternative (use 'eps' for the empty word)", lineno, arrow_col)
        for alt in alternatives:
            eps_positions = [col for tok, col in alt if tok == "eps"]
            if eps_positions and len(alt) > 1:
                raise GrammarSyntaxError("'eps' must be the only token of its alternative", lineno, eps_positions[0])
        rules.append((lineno, lhs, alternatives))

    if start_tok is None:
        raise GrammarSyntaxError("missing 'start:' header")
    if not saw_terminals_header:
        raise GrammarSyntaxError("missing 'terminals:' header")

    terminal_names = set(terminal_decls)
    nonterminal_names = set()
    if start_tok not in terminal_names:
        nonterminal_names.add(start_tok)
    for _, lhs, alternatives in rules:
        for tok, _ in lhs:
            if tok not in terminal_names:
                nonterminal_names.add(tok)
        for alt in alternatives:
            for tok, _ in alt:
                if tok != "eps" and tok not in terminal_names:
                    nonterminal_names.add(tok)

    symbols = {n: terminal(n) for n in terminal_names}
    symbols.update({n: nonterminal(n) for n in nonterminal_names})

    productions = []
    for _, lhs, alternatives in rules:
        lhs_syms = tuple(symbols[t] for t, _ in lhs)
        for alt in alternatives:
            if len(alt) == 1 and alt[0][0] == "eps":
                rhs_syms: tuple[Symbol, ...] = ()
            else:
                rhs_syms = tuple(symbols[t] for t, _ in alt)
            productions.append(Production(lhs_syms, rhs_syms, len(productions)))

    g = Grammar(
        name=name or "grammar",
        terminals=frozenset(symbols[n] for n in terminal_names),
        nonterminals=frozenset(symbols[n] for n in nonterminal_names),
        start=symbols[start_tok],
        productions=tuple(productions),
    )
    violations = validate_grammar(g)
    if violations:
        raise GrammarValidationError(violations)
    return g


def serialize_grammar(g: Grammar) -> str:
    """Render a grammar back into .grm text; reparsing yields equal content."""
    lines = []
    if re.fullmatch(r"\S+", g.name) and g.name not in RESERVED_TOKENS:
        lines.append(f"name: {g.name}")
    lines.append(f"start: {g.start.name}")
    terms = " ".join(sorted(s.name for s in g.terminals))
    lines.append(f"terminals: {terms}".rstrip())
    for p in g.productions:
        lines.append(str(p))
    return "\n".join(lines) + "\n"


def parse_form(g: Grammar, text: str) -> Form:
    """Parse a sentential form from whitespace-separated symbol names.

    ``eps`` or an empty string is the empty form.  As a convenience, an
    undeclared token whose characters are all names of single-character
    symbols is split character-wise, so ``aabaab`` reads as ``a a b a a b``.
    """
    toks = text.split()
    if toks in (["eps"], [EPSILON]):
        return ()
    lookup = g.symbols_by_name
    out: list[Symbol] = []
    for tok in toks:
        if tok == "eps":
            raise GrammarError("'eps' must stand alone in a form")
        sym = lookup.get(tok)
        if sym is not None:
            out.append(sym)
            continue
        expanded = [lookup.get(ch) for ch in tok]
        if all(s is not None and len(s.name) == 1 for s in expanded):
            out.extend(expanded)  # type: ignore[arg-type]
        else:
            raise GrammarError(f"unknown symbol {tok!r} in form")
    return tuple(out)
