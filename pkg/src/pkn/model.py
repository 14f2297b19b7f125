"""
Abstract syntax for PKN documents: terms, statements, metadata and queries.

Every node is an immutable, hashable dataclass so statements can be used
directly as dictionary keys; structural equality is statement identity.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field, fields
from typing import Iterable, Iterator, Mapping, Union


@functools.total_ordering
class Level(enum.Enum):
    """Seven-step qualitative scale used for every metadata parameter."""

    NONE = "none"
    VERY_LOW = "very-low"
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    VERY_HIGH = "very-high"
    CERTAIN = "certain"

    @property
    def anchor(self) -> float:
        return _ANCHORS[self]

    @classmethod
    def parse(cls, text: str) -> "Level":
        return cls(text)

    @classmethod
    def from_anchor(cls, x: float) -> "Level":
        """Nearest level to ``x``; equidistant values round down."""
        best = None
        best_dist = None
        for level in cls:
            dist = abs(level.anchor - x)
            # levels iterate in ascending order, so strict < keeps the lower on ties
            if best is None or dist < best_dist - 1e-12:
                best, best_dist = level, dist
        return best

    def __lt__(self, other):
        if not isinstance(other, Level):
            return NotImplemented
        return self.anchor < other.anchor

    def __str__(self):
        return self.value


_ANCHORS = {
    Level.NONE: 0.0,
    Level.VERY_LOW: 0.1,
    Level.LOW: 0.2,
    Level.MEDIUM: 0.5,
    Level.HIGH: 0.8,
    Level.VERY_HIGH: 0.9,
    Level.CERTAIN: 1.0,
}

PARAMETERS = ("certainty", "strength", "inverse", "typicality",
              "similarity", "dominance", "multiplicity")


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Name:
    """A named concept, optionally qualified by a chain of modifier prefixes."""

    base: str
    prefixes: tuple[str, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "Name":
        parts = text.split(":")
        return cls(parts[-1], tuple(parts[:-1]))

    @property
    def unmodified(self) -> "Name":
        return Name(self.base)

    def __str__(self):
        return ":".join(self.prefixes + (self.base,))


@dataclass(frozen=True)
class Number:
    value: float

    def __str__(self):
        return format_number(self.value)


@dataclass(frozen=True)
class Variable:
    """A query or rule variable. The empty name is the anonymous ``?``."""

    name: str = ""

    @property
    def anonymous(self) -> bool:
        return self.name == ""

    def __str__(self):
        return "?" + self.name


@dataclass(frozen=True)
class SubGraph:
    statements: tuple

    def __post_init__(self):
        if not self.statements:
            raise ValueError("a sub-graph needs at least one statement")


Term = Union[Name, Number, Variable, SubGraph]


def format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(float(value))


# ------------------------------------------------------------- metadata


@dataclass(frozen=True, eq=False)
class Metadata:
    """Ordered ``parameter -> Level`` pairs; equality ignores the order."""

    entries: tuple[tuple[str, Level], ...] = ()

    def __post_init__(self):
        names = [k for k, _ in self.entries]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate metadata parameter in {names}")

    @classmethod
    def of(cls, mapping: Mapping[str, Union[Level, str]] | None = None, **kw) -> "Metadata":
        items = dict(mapping or {}, **{k.replace("_", "-"): v for k, v in kw.items()})
        return cls(tuple((k, v if isinstance(v, Level) else Level(v)) for k, v in items.items()))

    def get(self, name: str, default=None):
        for k, v in self.entries:
            if k == name:
                return v
        return default

    def __contains__(self, name):
        return any(k == name for k, _ in self.entries)

    def __iter__(self) -> Iterator[tuple[str, Level]]:
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __bool__(self):
        return bool(self.entries)

    def __eq__(self, other):
        if not isinstance(other, Metadata):
            return NotImplemented
        return frozenset(self.entries) == frozenset(other.entries)

    def __hash__(self):
        return hash(frozenset(self.entries))

    def __repr__(self):
        return f"Metadata({dict(self.entries)!r})"


EMPTY = Metadata()


# ----------------------------------------------------------- statements


@dataclass(frozen=True)
class Property:
    """``descriptor of argument operator referent[, ...] [for scope] [(meta)]``"""

    descriptor: Term
    argument: Term
    operator: str
    referent: tuple
    scope: tuple = ()
    metadata: Metadata = field(default=EMPTY)

    def core(self) -> tuple:
        return (self.descriptor, self.argument, self.operator, self.referent)


@dataclass(frozen=True)
class Relation:
    """``subject relationship object [for scope] [(meta)]``"""

    subject: Term
    relationship: Name
    object: Term
    scope: tuple = ()
    metadata: Metadata = field(default=EMPTY)

    def core(self) -> tuple:
        return (self.subject, self.relationship, self.object)


@dataclass(frozen=True)
class Implication:
    antecedents: tuple
    consequents: tuple
    metadata: Metadata = field(default=EMPTY)

    @property
    def variables(self) -> frozenset:
        return frozenset(v for c in self.antecedents + self.consequents
                         for v in variables(c))

    @property
    def free_variables(self) -> frozenset:
        """Variables that only occur in consequents; the reasoner skolemizes these."""
        bound = {v for c in self.antecedents for v in variables(c)}
        return frozenset(v for c in self.consequents for v in variables(c)
                         if v not in bound)


@dataclass(frozen=True)
class Analogy:
    """``a:b::c:d`` -- a is to b as c is to d."""

    a: Term
    b: Term
    c: Term
    d: Term

    @property
    def terms(self) -> tuple:
        return (self.a, self.b, self.c, self.d)


Condition = Union[Property, Relation]
Statement = Union[Property, Relation, Implication, Analogy]

QUANTIFIERS = ("which", "count", "few", "many", "most")


@dataclass(frozen=True)
class Query:
    quantifier: str
    head: Variable
    where: tuple
    from_: tuple = ()

    def __post_init__(self):
        if self.quantifier not in QUANTIFIERS:
            raise ValueError(f"unknown quantifier {self.quantifier!r}")


# -------------------------------------------------------------- helpers


def iter_terms(node) -> Iterator:
    """Every term directly or transitively held by a statement or term."""
    if isinstance(node, (Name, Number, Variable)):
        yield node
    elif isinstance(node, (tuple, list)):
        for x in node:
            yield from iter_terms(x)
    elif isinstance(node, SubGraph):
        yield node
        for s in node.statements:
            yield from iter_terms(s)
    elif isinstance(node, (Property, Relation, Analogy)):
        for f in fields(node):
            if f.name == "metadata":
                continue
            value = getattr(node, f.name)
            if isinstance(value, tuple):
                for v in value:
                    yield from iter_terms(v)
            elif isinstance(value, str):
                continue
            else:
                yield from iter_terms(value)
    elif isinstance(node, Implication):
        for c in node.antecedents + node.consequents:
            yield from iter_terms(c)
    elif isinstance(node, Query):
        for c in node.where + node.from_:
            yield from iter_terms(c)


def variables(node) -> list[str]:
    """Names of the named variables in ``node``, first-occurrence order."""
    seen = []
    for t in iter_terms(node):
        if isinstance(t, Variable) and not t.anonymous and t.name not in seen:
            seen.append(t.name)
    return seen


def is_ground(node) -> bool:
    return not any(isinstance(t, Variable) for t in iter_terms(node))


def substitute(node, binding: Mapping[str, Term]):
    """Replace bound variables in a term, statement or condition list."""
    if not binding:
        return node
    if isinstance(node, Variable):
        return binding.get(node.name, node) if node.name else node
    if isinstance(node, (Name, Number)):
        return node
    if isinstance(node, SubGraph):
        return SubGraph(tuple(substitute(s, binding) for s in node.statements))
    if isinstance(node, tuple):
        return tuple(substitute(x, binding) for x in node)
    if isinstance(node, Property):
        return Property(substitute(node.descriptor, binding), substitute(node.argument, binding),
                        node.operator, substitute(node.referent, binding),
                        substitute(node.scope, binding), node.metadata)
    if isinstance(node, Relation):
        return Relation(substitute(node.subject, binding), node.relationship,
                        substitute(node.object, binding), substitute(node.scope, binding),
                        node.metadata)
    if isinstance(node, Implication):
        return Implication(substitute(node.antecedents, binding),
                           substitute(node.consequents, binding), node.metadata)
    if isinstance(node, Analogy):
        return Analogy(*(substitute(t, binding) for t in node.terms))
    raise TypeError(f"cannot substitute into {type(node).__name__}")


def unify(pattern, target, binding: dict | None = None) -> dict | None:
    """One-way matching of ``pattern`` against a ground ``target``.

    Returns the extended binding or None. Anonymous variables match anything
    without binding. Scope and metadata are ignored; callers compare the
    parts they care about.
    """
    binding = {} if binding is None else binding
    if isinstance(pattern, Variable):
        if pattern.anonymous:
            return binding
        bound = binding.get(pattern.name)
        if bound is None:
            if isinstance(target, Variable):
                return None
            return {**binding, pattern.name: target}
        return binding if bound == target else None
    if type(pattern) is not type(target):
        return None
    if isinstance(pattern, (Name, Number)):
        return binding if pattern == target else None
    if isinstance(pattern, SubGraph):
        return _unify_seq(pattern.statements, target.statements, binding)
    if isinstance(pattern, Property):
        if pattern.operator != target.operator:
            return None
        return _unify_seq((pattern.descriptor, pattern.argument) + pattern.referent,
                          (target.descriptor, target.argument) + target.referent, binding)
    if isinstance(pattern, Relation):
        if pattern.relationship != target.relationship:
            return None
        return _unify_seq((pattern.subject, pattern.object),
                          (target.subject, target.object), binding)
    if isinstance(pattern, Analogy):
        return _unify_seq(pattern.terms, target.terms, binding)
    if isinstance(pattern, Implication):
        return binding if pattern == target else None
    raise TypeError(f"cannot unify {type(pattern).__name__}")


def _unify_seq(ps: Iterable, ts: Iterable, binding):
    ps, ts = tuple(ps), tuple(ts)
    if len(ps) != len(ts):
        return None
    for p, t in zip(ps, ts):
        binding = unify(p, t, binding)
        if binding is None:
            return None
    return binding


def certainty_of(statement) -> Level:
    meta = getattr(statement, "metadata", EMPTY)
    return meta.get("certainty", Level.CERTAIN)


def count_statements(node) -> int:
    """Number of statements including implication conditions and sub-graph members."""
    if isinstance(node, SubGraph):
        return sum(count_statements(s) for s in node.statements)
    if isinstance(node, Implication):
        return 1 + sum(count_statements(c) for c in node.antecedents + node.consequents)
    if isinstance(node, (Property, Relation, Analogy)):
        return 1 + sum(count_statements(t) for t in iter_direct_terms(node)
                       if isinstance(t, SubGraph))
    return 0


def iter_direct_terms(statement) -> Iterator:
    if isinstance(statement, Property):
        yield statement.descriptor
        yield statement.argument
        yield from statement.referent
        yield from statement.scope
    elif isinstance(statement, Relation):
        yield statement.subject
        yield statement.relationship
        yield statement.object
        yield from statement.scope
    elif isinstance(statement, Analogy):
        yield from statement.terms
