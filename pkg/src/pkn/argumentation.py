"""
Counter-argument classification, verdict aggregation and explanations.

An argument can rebut another (contradictory conclusions), undermine it
(its conclusion contradicts one of the other's fact leaves) or undercut it
(its conclusion denies the statement licensing one of the other's
defeasible steps, e.g. a ``kind-of`` or ``similar-to`` link).

Contradiction is deliberately narrow: ``includes`` vs ``excludes`` on the
same descriptor and argument with a shared referent, differing values for a
descriptor or relationship declared functional, and ``{S} is-a lie`` as a
denial of ``S``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .model import (Analogy, Implication, Level, Name, Property, Relation, SubGraph, is_ground,
                    unify)
from .parser import serialize
from .reasoner import Argument, InferenceStep, Polarity, ProofParams, Reasoner, StepKind

IS_A = Name("is-a")
LIE = Name("lie")


class AttackKind(str, enum.Enum):
    UNDERMINE = "undermine"
    UNDERCUT = "undercut"
    REBUT = "rebut"

    def __str__(self):
        return self.value


class Stance(str, enum.Enum):
    SUPPORTED = "supported"
    OPPOSED = "opposed"
    UNDECIDED = "undecided"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class AttackEdge:
    attacker: Argument
    target: Argument
    kind: AttackKind


@dataclass
class Verdict:
    supposition: object
    net_certainty: Level
    polarity: Stance
    arguments: list
    counters: list = field(default_factory=list)
    attacks: list = field(default_factory=list)
    support: float = 0.0
    oppose: float = 0.0
    effective: list = field(default_factory=list)

    def summary(self) -> str:
        return f"{self.polarity} ({self.net_certainty})"


# -------------------------------------------------------- contradiction


def _same(a, b) -> bool:
    if isinstance(a, (Property, Relation)) and isinstance(b, (Property, Relation)):
        return type(a) is type(b) and unify(a, b, {}) is not None and unify(b, a, {}) is not None
    if isinstance(a, Implication) and isinstance(b, Implication):
        return a.antecedents == b.antecedents and a.consequents == b.consequents
    if isinstance(a, Analogy) and isinstance(b, Analogy):
        return a == b
    return False


def _denies(c, s) -> bool:
    """``c`` is ``{s} is-a lie``."""
    return (isinstance(c, Relation) and c.relationship == IS_A and c.object == LIE
            and isinstance(c.subject, SubGraph)
            and any(_same(inner, s) for inner in c.subject.statements))


def contradicts(a, b, functional=()) -> bool:
    """Symmetric contradiction test between two statements or conditions."""
    if _denies(a, b) or _denies(b, a):
        return True
    functional = {str(f) for f in functional}
    if isinstance(a, Property) and isinstance(b, Property):
        if a.descriptor != b.descriptor or a.argument != b.argument:
            return False
        ops = {a.operator, b.operator}
        if ops == {"includes", "excludes"}:
            return bool(set(a.referent) & set(b.referent))
        if ops == {"is"} and str(a.descriptor) in functional:
            return a.referent != b.referent
        return False
    if isinstance(a, Relation) and isinstance(b, Relation):
        return (a.subject == b.subject and a.relationship == b.relationship
                and str(a.relationship) in functional and a.object != b.object)
    return False


def classify_counter(a: Argument, b: Argument, graph, functional=()) -> AttackEdge | None:
    """How ``a`` attacks ``b``, if at all (rebut, then undermine, then undercut)."""
    if a is b or a == b:
        return None
    concl = a.conclusion
    if contradicts(concl, b.conclusion, functional):
        return AttackEdge(a, b, AttackKind.REBUT)
    for leaf in b.root.leaves():
        if contradicts(concl, graph[leaf.used_statement], functional) \
                or contradicts(concl, leaf.conclusion, functional):
            return AttackEdge(a, b, AttackKind.UNDERMINE)
    for step in b.root.walk():
        if step.kind is StepKind.FACT:
            continue
        if contradicts(concl, graph[step.used_statement], functional):
            return AttackEdge(a, b, AttackKind.UNDERCUT)
    return None


# ------------------------------------------------------------ aggregate


def aggregate(supposition, arguments, graph, functional=(), band: float = 0.1,
              counters=()) -> Verdict:
    """Net verdict after discounting arguments attacked by stronger ones.

    An argument attacked by a strictly stronger attacker keeps at most
    ``1 - attacker``; support and opposition are the best surviving anchors.
    ``counters`` only attack; they never count as support or opposition.
    """
    arguments = list(arguments)
    counters = list(counters)
    attacks = []
    for a in arguments + counters:
        for b in arguments:
            edge = classify_counter(a, b, graph, functional)
            if edge is not None:
                attacks.append(edge)
    effective = []
    for arg in arguments:
        value = arg.anchor
        for edge in attacks:
            if edge.target is arg and edge.attacker.anchor > arg.anchor:
                value = min(value, 1.0 - edge.attacker.anchor)
        effective.append(value)
    support = max((v for a, v in zip(arguments, effective) if a.polarity is Polarity.FOR),
                  default=0.0)
    oppose = max((v for a, v in zip(arguments, effective) if a.polarity is Polarity.AGAINST),
                 default=0.0)
    diff = round(support - oppose, 9)
    if abs(diff) < band:
        stance = Stance.UNDECIDED
    elif diff > 0:
        stance = Stance.SUPPORTED
    else:
        stance = Stance.OPPOSED
    return Verdict(supposition, Level.from_anchor(abs(diff)), stance, arguments, counters,
                   attacks, support, oppose, effective)


def _premise_denials(reasoner: Reasoner, statement) -> list:
    if isinstance(statement, (Property, Relation)) and is_ground(statement):
        return reasoner.contradictions(statement)
    return [Relation(SubGraph((statement,)), IS_A, LIE)]


def counter_arguments(reasoner: Reasoner, arguments) -> list[Argument]:
    """Arguments against the facts and licensing statements the given arguments use."""
    targets = []
    for arg in arguments:
        for step in arg.root.walk():
            sid = step.used_statement
            if sid not in targets:
                targets.append(sid)
    out, seen = [], {arg.root for arg in arguments}
    for sid in targets:
        for denial in _premise_denials(reasoner, reasoner.graph[sid]):
            for step in reasoner.candidates(denial, reasoner.params.max_depth):
                if step not in seen and not step.circular():
                    seen.add(step)
                    out.append(Argument(step, Polarity.COUNTER))
    return out


def ask(graph, supposition, params=None, band: float = 0.1) -> Verdict:
    """Prove a supposition, gather counter-arguments and aggregate a verdict."""
    params = params or ProofParams()
    reasoner = Reasoner(graph, params)
    arguments = reasoner.prove(supposition)
    counters = counter_arguments(reasoner, arguments)
    return aggregate(supposition, arguments, graph, params.functional, band, counters)


# -------------------------------------------------------------- explain


def explain_step(step: InferenceStep, graph, indent: int = 0) -> list[str]:
    pad = "  " * indent
    head = f"{pad}{serialize(step.conclusion)} ({step.kind}, {step.certainty})"
    source = f"#{step.used_statement}: {serialize(graph[step.used_statement])}"
    if step.kind is StepKind.FACT:
        return [f"{head} [{source}]"]
    lines = [head, f"{pad}  by {source}"]
    for p in step.premises:
        lines.extend(explain_step(p, graph, indent + 1))
    return lines


def _explain_argument(arg: Argument, verdict: Verdict, graph, indent: int) -> list[str]:
    lines = explain_step(arg.root, graph, indent)
    pad = "  " * (indent + 1)
    for edge in verdict.attacks:
        if edge.target is arg:
            lines.append(f"{pad}({edge.kind} by {edge.attacker.polarity}, "
                         f"{edge.attacker.certainty}: {serialize(edge.attacker.conclusion)})")
    return lines


def explain(verdict: Verdict, graph) -> str:
    """Indented explanation tree; FOR/AGAINST branches when both sides have arguments."""
    pros = [a for a in verdict.arguments if a.polarity is Polarity.FOR]
    cons = [a for a in verdict.arguments if a.polarity is Polarity.AGAINST]
    lines: list[str] = []
    if pros and cons:
        for label, group in (("FOR", pros), ("AGAINST", cons)):
            lines.append(f"{label}:")
            for arg in group:
                lines.extend(_explain_argument(arg, verdict, graph, 1))
    else:
        for arg in pros or cons:
            lines.extend(_explain_argument(arg, verdict, graph, 0))
    return "".join(line + "\n" for line in lines)
