"""Mini-language for picking atoms: the argument of select('...').

Grammar (documented in docs/selection-grammar.md):

    expr := term ("and" term)*
    term := "all" | "backbone" | "resname" CODE+ | "resid" INT+ | "chain" CHAR+

Tokens are whitespace-separated; keywords are case-insensitive; several values
after one keyword union within that term; "and" intersects terms. There is no
"or", "not", or grouping - the grammar is deliberately minimal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import (
    EmptySelectionError,
    MissingValuesError,
    SelectionTooDeepError,
    TrailingTokensError,
    UnknownKeywordError,
)
from .scene import BACKBONE_NAMES, Structure

MAX_DEPTH = 32

_KEYWORDS = {"all", "backbone", "resname", "resid", "chain", "and"}
_CODE_RE = re.compile(r"^[A-Za-z0-9]{1,4}$")
_INT_RE = re.compile(r"^[+-]?\d+$")


class SelectionExpr:
    """Base AST node. Instances are immutable and comparable."""

    def depth(self) -> int:
        return 1


@dataclass(frozen=True)
class All(SelectionExpr):
    pass


@dataclass(frozen=True)
class Backbone(SelectionExpr):
    pass


@dataclass(frozen=True)
class Resname(SelectionExpr):
    codes: frozenset[str]


@dataclass(frozen=True)
class Resid(SelectionExpr):
    numbers: frozenset[int]


@dataclass(frozen=True)
class Chain(SelectionExpr):
    ids: frozenset[str]


@dataclass(frozen=True)
class And(SelectionExpr):
    left: SelectionExpr
    right: SelectionExpr

    def depth(self) -> int:
        return 1 + max(self.left.depth(), self.right.depth())


def parse_selection(text: str) -> SelectionExpr:
    """Parse selection text into an AST.

    Raises EmptySelectionError, UnknownKeywordError, MissingValuesError,
    TrailingTokensError, or SelectionTooDeepError.
    """
    tokens = text.split()
    if not tokens:
        raise EmptySelectionError("selection text is empty")
    pos = 0

    def parse_term() -> tuple[SelectionExpr, int]:
        nonlocal pos
        keyword = tokens[pos].lower()
        if keyword == "all":
            pos += 1
            return All(), pos
        if keyword == "backbone":
            pos += 1
            return Backbone(), pos
        if keyword == "resname":
            pos += 1
            codes = _take_values(_CODE_RE)
            if not codes:
                raise MissingValuesError("resname")
            return Resname(frozenset(c.upper() for c in codes)), pos
        if keyword == "resid":
            pos += 1
            values = _take_values(_INT_RE)
            if not values:
                raise MissingValuesError("resid")
            return Resid(frozenset(int(v) for v in values)), pos
        if keyword == "chain":
            pos += 1
            ids = _take_values(re.compile(r"^\S$"))
            if not ids:
                raise MissingValuesError("chain")
            return Chain(frozenset(c.upper() for c in ids)), pos
        raise UnknownKeywordError(tokens[pos])

    def _take_values(pattern: re.Pattern) -> list[str]:
        nonlocal pos
        values = []
        while pos < len(tokens) and tokens[pos].lower() not in _KEYWORDS and pattern.match(tokens[pos]):
            values.append(tokens[pos])
            pos += 1
        return values

    expr, pos = parse_term()
    while pos < len(tokens):
        if tokens[pos].lower() == "and":
            pos += 1
            if pos >= len(tokens):
                raise MissingValuesError("and")
            right, pos = parse_term()
            expr = And(expr, right)
            if expr.depth() > MAX_DEPTH:
                raise SelectionTooDeepError(f"selection deeper than {MAX_DEPTH} levels")
        else:
            raise TrailingTokensError(tokens[pos])
    return expr


def eval_selection(expr: SelectionExpr, structure: Structure) -> set[int]:
    """Evaluate an AST against a structure, returning the matching atom
    indices. Pure; an empty result is legal."""
    atoms = structure.atoms
    if isinstance(expr, All):
        return set(range(len(atoms)))
    if isinstance(expr, Backbone):
        return {i for i, a in enumerate(atoms) if a.name in BACKBONE_NAMES}
    if isinstance(expr, Resname):
        return {i for i, a in enumerate(atoms) if a.resname in expr.codes}
    if isinstance(expr, Resid):
        return {i for i, a in enumerate(atoms) if a.resid in expr.numbers}
    if isinstance(expr, Chain):
        return {i for i, a in enumerate(atoms) if a.chain.upper() in expr.ids}
    if isinstance(expr, And):
        return eval_selection(expr.left, structure) & eval_selection(expr.right, structure)
    raise TypeError(f"not a selection node: {expr!r}")


def pretty_print(expr: SelectionExpr) -> str:
    """Canonical rendering: lowercase keywords, uppercase sorted values.
    parse_selection(pretty_print(e)) reproduces e."""
    if isinstance(expr, All):
        return "all"
    if isinstance(expr, Backbone):
        return "backbone"
    if isinstance(expr, Resname):
        return "resname " + " ".join(sorted(expr.codes))
    if isinstance(expr, Resid):
        return "resid " + " ".join(str(n) for n in sorted(expr.numbers))
    if isinstance(expr, Chain):
        return "chain " + " ".join(sorted(expr.ids))
    if isinstance(expr, And):
        return f"{pretty_print(expr.left)} and {pretty_print(expr.right)}"
    raise TypeError(f"not a selection node: {expr!r}")
