"""
Export of PKN graphs as RDF triples and Turtle.

Every statement, including implication conditions and statements nested in
sub-graph terms, is reified as one blank node ``_:bN``. Lists (multi-valued
referents, scopes, implication conditions, sub-graph members) become RDF
collections whose cells are labelled ``_:lN`` in the triple view and written
inline as ``( ... )`` in Turtle.
"""

from __future__ import annotations

from dataclasses import dataclass
from urllib.parse import quote

from .model import (Analogy, Implication, Name, Number, Property, Relation, SubGraph,
                    Variable, format_number, iter_terms)

PKN_NAMESPACE = "urn:x-pkn:"
RDF_NAMESPACE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"


@dataclass(frozen=True)
class IRI:
    prefix: str
    local: str

    def __str__(self):
        return f"{self.prefix}:{self.local}"


@dataclass(frozen=True)
class BNode:
    """Blank node reifying one PKN statement."""

    index: int

    def __str__(self):
        return f"_:b{self.index}"


@dataclass(frozen=True)
class ListCell:
    """Blank node of an RDF collection cell."""

    index: int

    def __str__(self):
        return f"_:l{self.index}"


@dataclass(frozen=True)
class Literal:
    value: object

    def __str__(self):
        if isinstance(self.value, str):
            escaped = self.value.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"'
        return format_number(self.value)


@dataclass(frozen=True)
class Triple:
    subject: object
    predicate: IRI
    object: object

    def __str__(self):
        return f"{self.subject} {self.predicate} {self.object} ."


RDF_TYPE = IRI("rdf", "type")
RDF_FIRST = IRI("rdf", "first")
RDF_REST = IRI("rdf", "rest")
RDF_NIL = IRI("rdf", "nil")
VARIABLE = IRI("pkn", "Variable")


def pkn(name: str) -> IRI:
    # only unreserved identifier characters stay literal; ':' and '?' are escaped
    return IRI("pkn", quote(name, safe="-_"))


@dataclass(frozen=True)
class Collection:
    items: tuple


def name_node(name: Name) -> IRI:
    return pkn(str(name))


def variable_node(var: Variable) -> IRI:
    return pkn(str(var))


class _Builder:
    """Turns statements into ``(node, [(predicate, value)])`` blocks in pre-order."""

    def __init__(self):
        self.blocks: list = []
        self.variables: list = []

    def statement(self, s) -> BNode:
        node = BNode(len(self.blocks))
        block: list = []
        self.blocks.append((node, block))
        if isinstance(s, Property):
            block.append((RDF_TYPE, pkn("Property")))
            block.append((pkn("descriptor"), self.term(s.descriptor)))
            block.append((pkn("argument"), self.term(s.argument)))
            block.append((pkn("operator"), pkn(s.operator)))
            refs = [self.term(t) for t in s.referent]
            block.append((pkn("referent"), refs[0] if len(refs) == 1 else Collection(tuple(refs))))
            self._scope_and_metadata(block, s)
        elif isinstance(s, Relation):
            block.append((RDF_TYPE, pkn("Relation")))
            block.append((pkn("subject"), self.term(s.subject)))
            block.append((pkn("relationship"), name_node(s.relationship)))
            block.append((pkn("object"), self.term(s.object)))
            self._scope_and_metadata(block, s)
        elif isinstance(s, Implication):
            block.append((RDF_TYPE, pkn("Implication")))
            names = []
            for c in s.antecedents + s.consequents:
                for v in _variables(c):
                    if v not in names:
                        names.append(v)
            block.append((pkn("variables"),
                          Collection(tuple(self.term(v) for v in names))))
            block.append((pkn("antecedents"),
                          Collection(tuple(self.statement(c) for c in s.antecedents))))
            block.append((pkn("consequents"),
                          Collection(tuple(self.statement(c) for c in s.consequents))))
            self._metadata(block, s)
        elif isinstance(s, Analogy):
            block.append((RDF_TYPE, pkn("Analogy")))
            for field_name, t in zip("abcd", s.terms):
                block.append((pkn(field_name), self.term(t)))
        else:
            raise TypeError(f"cannot export {type(s).__name__}")
        return node

    def _scope_and_metadata(self, block, s):
        if s.scope:
            block.append((pkn("scope"), Collection(tuple(self.term(t) for t in s.scope))))
        self._metadata(block, s)

    def _metadata(self, block, s):
        for key, level in s.metadata:
            block.append((pkn(key), Literal(str(level))))

    def term(self, t):
        if isinstance(t, Name):
            return name_node(t)
        if isinstance(t, Number):
            return Literal(t.value)
        if isinstance(t, Variable):
            if t not in self.variables:
                self.variables.append(t)
            return variable_node(t)
        if isinstance(t, SubGraph):
            return Collection(tuple(self.statement(s) for s in t.statements))
        raise TypeError(f"cannot export term {t!r}")


def _variables(node) -> list:
    return [t for t in iter_terms(node) if isinstance(t, Variable)]


def _build(graph) -> _Builder:
    builder = _Builder()
    for statement in graph:
        builder.statement(statement)
    return builder


def to_triples(graph) -> list[Triple]:
    """Flat triple list; statement blocks first, then variable typing triples."""
    builder = _build(graph)
    out: list[Triple] = []
    cells = [0]

    def flatten(value):
        if not isinstance(value, Collection):
            return value
        if not value.items:
            return RDF_NIL
        heads = [ListCell(cells[0] + i) for i in range(len(value.items))]
        cells[0] += len(heads)
        for i, (cell, item) in enumerate(zip(heads, value.items)):
            out.append(Triple(cell, RDF_FIRST, flatten(item)))
            out.append(Triple(cell, RDF_REST, heads[i + 1] if i + 1 < len(heads) else RDF_NIL))
        return heads[0]

    for node, block in builder.blocks:
        for predicate, value in block:
            out.append(Triple(node, predicate, flatten(value)))
    for var in builder.variables:
        out.append(Triple(variable_node(var), RDF_TYPE, VARIABLE))
    return out


def _render(value) -> str:
    if isinstance(value, Collection):
        if not value.items:
            return "()"
        return "( " + " ".join(_render(v) for v in value.items) + " )"
    return str(value)


def to_turtle(graph) -> str:
    """Deterministic Turtle text: header, one block per statement, then variables."""
    builder = _build(graph)
    lines = [f"@prefix pkn: <{PKN_NAMESPACE}> .", f"@prefix rdf: <{RDF_NAMESPACE}> ."]
    for node, block in builder.blocks:
        lines.append("")
        parts = []
        for predicate, value in block:
            pred = "a" if predicate == RDF_TYPE else str(predicate)
            parts.append(f"{pred} {_render(value)}")
        lines.append(f"{node} " + " ;\n    ".join(parts) + " .")
    if builder.variables:
        lines.append("")
        for var in builder.variables:
            lines.append(f"{variable_node(var)} a {VARIABLE} .")
    return "\n".join(lines) + "\n"


__all__ = ["PKN_NAMESPACE", "IRI", "BNode", "ListCell", "Literal", "Triple", "Collection",
           "to_triples", "to_turtle", "name_node", "variable_node"]
