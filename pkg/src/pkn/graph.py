"""
Indexed knowledge-graph snapshots.

A :class:`KnowledgeGraph` never changes after construction. ``add`` and
``extend`` return a new snapshot, so a graph can be shared freely between
threads and older snapshots stay valid (the REPL's undo relies on this).
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Iterable, Iterator

from .errors import InvalidStatement, UnindexablePattern
from .model import (Analogy, Implication, Name, Property, Relation, Statement, SubGraph,
                    Variable, is_ground, iter_terms, unify)

KIND_OF = Name("kind-of")

# operators whose referent list is read as a set of members rather than a tuple
SET_OPERATORS = frozenset({"includes", "excludes"})


def validate(statement: Statement) -> None:
    """Raise :class:`InvalidStatement` unless ``statement`` may be asserted."""
    if isinstance(statement, (Property, Relation)):
        if not is_ground(statement):
            raise InvalidStatement(f"variable in asserted fact: {statement}")
        _validate_condition(statement)
    elif isinstance(statement, Implication):
        if not statement.antecedents or not statement.consequents:
            raise InvalidStatement("implication needs antecedents and consequents")
        for c in statement.antecedents + statement.consequents:
            if not isinstance(c, (Property, Relation)):
                raise InvalidStatement(f"implication condition must be a property or relation: {c}")
            _validate_condition(c)
    elif isinstance(statement, Analogy):
        n_vars = sum(isinstance(t, Variable) for t in statement.terms)
        if n_vars > 1:
            raise InvalidStatement("an analogy may leave at most one position open")
        for t in statement.terms:
            if isinstance(t, Name) and t.prefixes:
                raise InvalidStatement("modifier prefixes are not allowed inside analogies")
    else:
        raise InvalidStatement(f"not a statement: {statement!r}")


def _validate_condition(c) -> None:
    if isinstance(c, Property):
        if not c.referent:
            raise InvalidStatement("property statement with empty referent")
        if len(set(c.referent)) != len(c.referent):
            raise InvalidStatement(f"duplicate referents in {c}")
    for t in iter_terms(c):
        if isinstance(t, SubGraph):
            for s in t.statements:
                if isinstance(s, (Property, Relation)):
                    _validate_condition(s)


class KnowledgeGraph:
    """Immutable, indexed collection of PKN statements."""

    def __init__(self, statements: Iterable[Statement] = ()):
        self._statements: list = []
        self._ids: dict = {}
        self._by_descriptor: dict = {}
        self._by_relationship: dict = {}
        self._by_head: dict = {}
        self._by_object: dict = {}
        self._implications: list[int] = []
        self._analogies: list[int] = []
        for s in statements:
            self._insert(s)

    @classmethod
    def from_text(cls, text: str) -> "KnowledgeGraph":
        """Parse PKN text and load its statements; queries in the text are skipped."""
        from .parser import parse_with_recovery

        result = parse_with_recovery(text)
        if result.errors:
            raise result.errors[0]
        return cls(result.statements)

    # -- construction -------------------------------------------------

    def _insert(self, s: Statement) -> int:
        validate(s)
        existing = self._ids.get(s)
        if existing is not None:
            return existing
        sid = len(self._statements)
        self._statements.append(s)
        self._ids[s] = sid
        for table, key in self._index_keys(s):
            getattr(self, table).setdefault(key, []).append(sid)
        if isinstance(s, Implication):
            self._implications.append(sid)
        elif isinstance(s, Analogy):
            self._analogies.append(sid)
        return sid

    @staticmethod
    def _index_keys(s) -> list:
        if isinstance(s, Property):
            return [("_by_descriptor", (s.descriptor, s.operator)), ("_by_head", s.argument)]
        if isinstance(s, Relation):
            return [("_by_relationship", s.relationship), ("_by_head", s.subject),
                    ("_by_object", s.object)]
        return []

    def _copy(self) -> "KnowledgeGraph":
        g = KnowledgeGraph.__new__(KnowledgeGraph)
        g._statements = list(self._statements)
        g._ids = dict(self._ids)
        for table in ("_by_descriptor", "_by_relationship", "_by_head", "_by_object"):
            setattr(g, table, {k: list(v) for k, v in getattr(self, table).items()})
        g._implications = list(self._implications)
        g._analogies = list(self._analogies)
        return g

    def add(self, statement: Statement) -> tuple["KnowledgeGraph", int]:
        """Return ``(new_snapshot, statement_id)``; duplicates reuse their id."""
        validate(statement)
        existing = self._ids.get(statement)
        if existing is not None:
            return self, existing
        g = self._copy()
        return g, g._insert(statement)

    def extend(self, statements: Iterable[Statement]) -> "KnowledgeGraph":
        g = self._copy()
        for s in statements:
            g._insert(s)
        return g

    # -- access ---------------------------------------------------------

    def __len__(self):
        return len(self._statements)

    def __iter__(self) -> Iterator[Statement]:
        return iter(self._statements)

    def __getitem__(self, sid: int) -> Statement:
        return self._statements[sid]

    def __contains__(self, statement) -> bool:
        return statement in self._ids

    @property
    def statements(self) -> tuple:
        return tuple(self._statements)

    def id_of(self, statement) -> int | None:
        return self._ids.get(statement)

    def items(self) -> Iterator[tuple[int, Statement]]:
        return enumerate(self._statements)

    def implications(self) -> list[tuple[int, Implication]]:
        return [(i, self._statements[i]) for i in self._implications]

    def analogies(self) -> list[tuple[int, Analogy]]:
        return [(i, self._statements[i]) for i in self._analogies]

    def properties(self) -> Iterator[tuple[int, Property]]:
        return ((i, s) for i, s in enumerate(self._statements) if isinstance(s, Property))

    def relations(self, relationship: Name | None = None) -> Iterator[tuple[int, Relation]]:
        if relationship is None:
            return ((i, s) for i, s in enumerate(self._statements) if isinstance(s, Relation))
        return ((i, self._statements[i]) for i in self._by_relationship.get(relationship, ()))

    def relations_from(self, subject, relationship: Name) -> list[tuple[int, Relation]]:
        return [(i, self._statements[i]) for i in self._by_head.get(subject, ())
                if isinstance(self._statements[i], Relation)
                and self._statements[i].relationship == relationship]

    def relations_to(self, obj, relationship: Name) -> list[tuple[int, Relation]]:
        return [(i, self._statements[i]) for i in self._by_object.get(obj, ())
                if self._statements[i].relationship == relationship]

    # -- pattern matching ---------------------------------------------

    def match_properties(self, pattern: Property) -> list[tuple[int, dict]]:
        """Stored properties unifiable with ``pattern``, in insertion order.

        For ``includes``/``excludes`` each pattern referent must unify with
        some stored referent; other operators match referent lists
        position by position. Raises :class:`UnindexablePattern` when both
        descriptor and argument are variables.
        """
        if not isinstance(pattern.descriptor, Variable):
            candidates = self._by_descriptor.get((pattern.descriptor, pattern.operator), ())
        elif not isinstance(pattern.argument, Variable):
            candidates = [i for i in self._by_head.get(pattern.argument, ())
                          if isinstance(self._statements[i], Property)]
        else:
            raise UnindexablePattern(f"no concrete descriptor or argument in {pattern}")
        out = []
        for sid in candidates:
            for b in unify_property(pattern, self._statements[sid]):
                out.append((sid, b))
        return out

    def scan_properties(self, pattern: Property) -> list[tuple[int, dict]]:
        """Unindexed fallback used when :meth:`match_properties` cannot help."""
        out = []
        for sid, s in self.properties():
            for b in unify_property(pattern, s):
                out.append((sid, b))
        return out

    def match_relations(self, pattern: Relation) -> list[tuple[int, dict]]:
        if not isinstance(pattern.subject, (Variable, SubGraph)):
            candidates = [i for i in self._by_head.get(pattern.subject, ())
                          if isinstance(self._statements[i], Relation)]
        else:
            candidates = self._by_relationship.get(pattern.relationship, ())
        out = []
        for sid in candidates:
            b = unify(pattern, self._statements[sid], {})
            if b is not None and scope_matches(pattern, self._statements[sid]):
                out.append((sid, b))
        return out

    def match(self, pattern) -> list[tuple[int, dict]]:
        if isinstance(pattern, Property):
            try:
                return self.match_properties(pattern)
            except UnindexablePattern:
                return self.scan_properties(pattern)
        if isinstance(pattern, Relation):
            return self.match_relations(pattern)
        raise TypeError(f"cannot match {type(pattern).__name__}")

    # -- hierarchy --------------------------------------------------------

    def kind_of_ancestors(self, concept) -> list:
        """Breadth-first transitive closure over ``kind-of``; cycle safe."""
        seen = {concept}
        order = []
        queue = deque([concept])
        while queue:
            node = queue.popleft()
            for _, r in self.relations_from(node, KIND_OF):
                if r.object not in seen:
                    seen.add(r.object)
                    order.append(r.object)
                    queue.append(r.object)
        return order

    # -- audit ------------------------------------------------------------

    def audit(self) -> list[str]:
        """Consistency problems between statements and indexes (empty when sound)."""
        problems = []
        expected: dict = {}
        for sid, s in enumerate(self._statements):
            if self._ids.get(s) != sid:
                problems.append(f"identity map disagrees for #{sid}")
            for table, key in self._index_keys(s):
                expected.setdefault(table, {}).setdefault(key, []).append(sid)
        for table in ("_by_descriptor", "_by_relationship", "_by_head", "_by_object"):
            actual = getattr(self, table)
            want = expected.get(table, {})
            for key in set(actual) | set(want):
                if actual.get(key, []) != want.get(key, []):
                    problems.append(f"{table}[{key}] = {actual.get(key)} expected {want.get(key)}")
        if len(self._ids) != len(self._statements):
            problems.append("identity map size mismatch")
        return problems


def scope_matches(pattern, stored) -> bool:
    return not pattern.scope or set(pattern.scope) <= set(stored.scope)


def unify_property(pattern: Property, stored: Property) -> list[dict]:
    """All bindings making ``pattern`` agree with ``stored`` (see match_properties)."""
    if pattern.operator != stored.operator or not scope_matches(pattern, stored):
        return []
    b = unify(pattern.descriptor, stored.descriptor, {})
    if b is None:
        return []
    b = unify(pattern.argument, stored.argument, b)
    if b is None:
        return []
    if pattern.operator not in SET_OPERATORS:
        b = _unify_list(pattern.referent, stored.referent, b)
        return [] if b is None else [b]
    results = []
    for choice in itertools.product(stored.referent, repeat=len(pattern.referent)):
        nb = _unify_list(pattern.referent, choice, b)
        if nb is not None and nb not in results:
            results.append(nb)
    return results


def _unify_list(ps, ts, b):
    if len(ps) != len(ts):
        return None
    for p, t in zip(ps, ts):
        b = unify(p, t, b)
        if b is None:
            return None
    return b


def add_statement(graph: KnowledgeGraph, statement: Statement) -> tuple[KnowledgeGraph, int]:
    return graph.add(statement)


def match_properties(graph: KnowledgeGraph, pattern: Property) -> list[tuple[int, dict]]:
    return graph.match_properties(pattern)


def kind_of_ancestors(graph: KnowledgeGraph, concept) -> list:
    return graph.kind_of_ancestors(concept)
