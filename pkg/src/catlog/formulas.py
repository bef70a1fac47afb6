"""Propositional formula trees, substitution, parsing and bounded enumeration.

Formulas are built from variables x0, x1, ... and prefix applications of
named connectives.  The slice of all formulas whose variable set is exactly
{x0, ..., x_{n-1}} plays the role of an arity-n "derived connective" and is
the raw material for flexible signature morphisms.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterator


class ParseError(ValueError):
    """Raised on malformed formula text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class StructuralError(ValueError):
    """Raised when a formula does not fit a signature (arity/unknown head)."""


class Formula:
    """Immutable tree; hash, complexity and variable set are cached."""

    __slots__ = ()


class Var(Formula):
    __slots__ = ("index",)

    def __init__(self, index: int):
        object.__setattr__(self, "index", index)

    def __setattr__(self, *_):
        raise AttributeError("formulas are immutable")

    def __eq__(self, other):
        return type(other) is Var and other.index == self.index

    def __hash__(self):
        return hash((1, self.index))

    def __repr__(self):
        return f"Var({self.index})"

    def __str__(self):
        return f"x{self.index}"


class App(Formula):
    __slots__ = ("connective", "args", "_hash", "_compl", "_vars")

    def __init__(self, connective: str, args: tuple[Formula, ...]):
        object.__setattr__(self, "connective", connective)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "_hash", hash((connective, args)))
        object.__setattr__(self, "_compl", 1 + sum(complexity(a) for a in args))
        vs: frozenset[int] = frozenset()
        for a in args:
            vs |= variables(a)
        object.__setattr__(self, "_vars", vs)

    def __setattr__(self, *_):
        raise AttributeError("formulas are immutable")

    def __eq__(self, other):
        if self is other:
            return True
        return (type(other) is App and other._hash == self._hash
                and other.connective == self.connective and other.args == self.args)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"App({self.connective!r}, {self.args!r})"

    def __str__(self):
        if not self.args:
            return self.connective
        return f"{self.connective}({', '.join(map(str, self.args))})"


def var(index: int) -> Var:
    return Var(index)


def app(connective: str, *args: Formula) -> App:
    return App(connective, tuple(args))


_EMPTY_VARS: frozenset[int] = frozenset()


def complexity(phi: Formula) -> int:
    """Number of connective occurrences in phi."""
    if type(phi) is Var:
        return 0
    return phi._compl


def variables(phi: Formula) -> frozenset[int]:
    """Set of variable indices occurring in phi."""
    if type(phi) is Var:
        return frozenset((phi.index,))
    return phi._vars


def subformulas(phi: Formula) -> set[Formula]:
    out = {phi}
    if isinstance(phi, App):
        for a in phi.args:
            out |= subformulas(a)
    return out


def sort_key(phi: Formula):
    """Canonical order: complexity first, then head/argument lexicographic."""
    if isinstance(phi, Var):
        return (0, 0, phi.index, ())
    return (complexity(phi), 1, phi.connective, tuple(sort_key(a) for a in phi.args))


# ---------------------------------------------------------------------------
# Substitution


class Substitution:
    """Finite map from variable indices to formulas, identity elsewhere."""

    def __init__(self, mapping: dict[int, Formula] | None = None):
        self.mapping = dict(mapping or {})

    def __call__(self, index: int) -> Formula:
        return self.mapping.get(index, Var(index))

    def __eq__(self, other):
        if not isinstance(other, Substitution):
            return NotImplemented
        keys = set(self.mapping) | set(other.mapping)
        return all(self(k) == other(k) for k in keys)

    def __hash__(self):
        items = sorted((k, v) for k, v in self.mapping.items() if v != Var(k))
        return hash(tuple(items))

    def __repr__(self):
        inner = ", ".join(f"x{k} -> {v}" for k, v in sorted(self.mapping.items()))
        return f"Substitution({inner})"

    def support(self) -> frozenset[int]:
        return frozenset(k for k, v in self.mapping.items() if v != Var(k))

    def to_json(self) -> dict:
        return {f"x{k}": str(v) for k, v in sorted(self.mapping.items()) if v != Var(k)}


IDENTITY_SUBSTITUTION = Substitution()


def substitute(sigma: Substitution, phi: Formula) -> Formula:
    """Homomorphic extension of sigma applied to phi."""
    if isinstance(phi, Var):
        return sigma(phi.index)
    return App(phi.connective, tuple(substitute(sigma, a) for a in phi.args))


def compose_substitutions(sigma2: Substitution, sigma1: Substitution) -> Substitution:
    """Substitution acting as: first sigma1, then sigma2."""
    support = set(sigma1.mapping) | set(sigma2.mapping)
    return Substitution({i: substitute(sigma2, sigma1(i)) for i in support})


def match(pattern: Formula, concrete: Formula, binding: dict[int, Formula] | None = None,
          bindable=None) -> Substitution | None:
    """One-sided match: a substitution s with substitute(s, pattern) == concrete.

    `bindable` restricts which pattern variables may be bound; the others act
    as fixed symbols that must literally reappear in `concrete`.
    """
    binding = {} if binding is None else binding

    def walk(p: Formula, c: Formula) -> bool:
        if isinstance(p, Var):
            if bindable is not None and not bindable(p.index):
                return p == c
            seen = binding.get(p.index)
            if seen is None:
                binding[p.index] = c
                return True
            return seen == c
        if not isinstance(c, App) or c.connective != p.connective:
            return False
        if len(c.args) != len(p.args):
            return False
        return all(walk(pa, ca) for pa, ca in zip(p.args, c.args))

    if walk(pattern, concrete):
        return Substitution(binding)
    return None


# ---------------------------------------------------------------------------
# Parsing and printing

_TOKEN = re.compile(r"\s*(?:(?P<var>x[0-9]+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<punct>[(),]))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].strip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {text[pos:].strip()[0]!r}", pos)
        if m.lastgroup is not None:
            tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    return tokens


def parse(text: str, sig=None) -> Formula:
    """Parse prefix formula text; validate arities against sig when given."""
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty formula", 0)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def expect(kind: str, value: str | None = None):
        nonlocal pos
        tok = peek()
        if tok is None:
            raise ParseError(f"unexpected end of input, expected {value or kind}", len(text))
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or kind}, found {tok[1]!r}", tok[2])
        pos += 1
        return tok

    def formula() -> Formula:
        nonlocal pos
        tok = peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(text))
        kind, value, at = tok
        if kind == "var":
            pos += 1
            return Var(int(value[1:]))
        if kind != "ident":
            raise ParseError(f"expected a formula, found {value!r}", at)
        pos += 1
        args: list[Formula] = []
        nxt = peek()
        if nxt is not None and nxt[0] == "punct" and nxt[1] == "(":
            pos += 1
            args.append(formula())
            while True:
                tok2 = peek()
                if tok2 is None:
                    raise ParseError("unterminated argument list", len(text))
                if tok2[1] == ",":
                    pos += 1
                    args.append(formula())
                elif tok2[1] == ")":
                    pos += 1
                    break
                else:
                    raise ParseError(f"expected ',' or ')', found {tok2[1]!r}", tok2[2])
        node = App(value, tuple(args))
        if sig is not None:
            arity = sig.connectives.get(value)
            if arity is None:
                raise ParseError(f"unknown connective {value!r}", at)
            if arity != len(args):
                raise ParseError(
                    f"connective {value!r} expects {arity} argument(s), got {len(args)}", at)
        return node

    result = formula()
    if pos != len(tokens):
        raise ParseError(f"trailing input {tokens[pos][1]!r}", tokens[pos][2])
    if sig is not None:
        check_formula(sig, result)
    return result


def fmt(phi: Formula) -> str:
    return str(phi)


def check_formula(sig, phi: Formula) -> None:
    """Raise StructuralError unless phi is well-formed over sig."""
    if isinstance(phi, Var):
        return
    arity = sig.connectives.get(phi.connective)
    if arity is None:
        raise StructuralError(f"unknown connective {phi.connective!r} in {phi}")
    if arity != len(phi.args):
        raise StructuralError(
            f"connective {phi.connective!r} has arity {arity}, applied to {len(phi.args)} in {phi}")
    for a in phi.args:
        check_formula(sig, a)


# ---------------------------------------------------------------------------
# Bounded enumeration of formulas and slices


@lru_cache(maxsize=4096)
def _enumerate_cached(sig, n: int, max_compl: int) -> tuple[Formula, ...]:
    by_level: list[list[Formula]] = [[Var(i) for i in range(n)]]
    for level in range(1, max_compl + 1):
        layer: list[Formula] = []
        for c, arity in sorted(sig.connectives.items()):
            if arity == 0:
                if level == 1:
                    layer.append(App(c, ()))
                continue
            for split in _compositions(level - 1, arity):
                for combo in _product([by_level[s] for s in split]):
                    layer.append(App(c, tuple(combo)))
        by_level.append(layer)
    out = [phi for level in by_level for phi in level]
    out.sort(key=sort_key)
    return tuple(out)


def enumerate_formulas(sig, n: int, max_compl: int) -> list[Formula]:
    """All formulas with variables among {x0..x_{n-1}} and complexity <= max_compl."""
    return list(_enumerate_cached(sig, n, max_compl))


def enumerate_slice(sig, n: int, max_compl: int) -> list[Formula]:
    """Formulas whose variable set is exactly {x0..x_{n-1}}, complexity <= max_compl."""
    target = frozenset(range(n))
    return [phi for phi in _enumerate_cached(sig, n, max_compl)
            if variables(phi) == target]


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _product(pools: list[list[Formula]]) -> Iterator[tuple[Formula, ...]]:
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for tail in _product(pools[1:]):
            yield (head,) + tail
