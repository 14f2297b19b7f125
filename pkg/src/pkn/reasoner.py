"""
Supposition-driven plausible inference.

Starting from a supposition the reasoner searches backwards for evidence:
stored facts, implication rules used forwards (via ``strength``) or in
reverse (via ``inverse``), specialization from parent classes,
generalization from sub-classes, similarity and analogy. Every step
carries a weight and a conclusion is only as certain as its weakest link::

    certainty(step) = min(weight, certainty(premise) for each premise)

``best(c, d)`` is the strongest argument for ``c`` using at most ``d``
nested inference steps, so results are memoized per ``(condition, depth)``
and the search terminates on cyclic graphs.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .config import EngineConfig, StepWeights
from .graph import KIND_OF, SET_OPERATORS, KnowledgeGraph
from .model import (Implication, Level, Name, Property, Relation, SubGraph,
                    Variable, certainty_of, is_ground, substitute, unify, variables)

SIMILAR_TO = Name("similar-to")
IS_A = Name("is-a")
LIE = Name("lie")
# links that license steps rather than being concluded by them
STRUCTURAL = frozenset({KIND_OF, SIMILAR_TO})


class StepKind(str, enum.Enum):
    FACT = "fact"
    SPECIALIZATION = "specialization"
    GENERALIZATION = "generalization"
    SIMILARITY = "similarity"
    IMPLICATION_FORWARD = "implication-forward"
    IMPLICATION_BACKWARD = "implication-backward"
    ANALOGY = "analogy"

    def __str__(self):
        return self.value


class Polarity(str, enum.Enum):
    FOR = "for"
    AGAINST = "against"
    # attacks a premise or licensing statement rather than the supposition
    COUNTER = "counter"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class InferenceStep:
    kind: StepKind
    conclusion: object
    premises: tuple
    used_statement: int
    weight: float
    certainty: Level

    @property
    def anchor(self) -> float:
        return self.certainty.anchor

    def walk(self):
        yield self
        for p in self.premises:
            yield from p.walk()

    def leaves(self) -> list["InferenceStep"]:
        return [s for s in self.walk() if s.kind is StepKind.FACT]

    def depth(self) -> int:
        return 0 if not self.premises else 1 + max(p.depth() for p in self.premises)

    def circular(self) -> bool:
        """True when some step relies, further down, on its own conclusion."""
        return any(_strip(d.conclusion) == _strip(step.conclusion)
                   for step in self.walk() for p in step.premises for d in p.walk())


@dataclass(frozen=True)
class Argument:
    root: InferenceStep
    polarity: Polarity

    @property
    def certainty(self) -> Level:
        return self.root.certainty

    @property
    def anchor(self) -> float:
        return self.root.anchor

    @property
    def conclusion(self):
        return self.root.conclusion


ALL_KINDS = frozenset(StepKind)


@dataclass(frozen=True)
class ProofParams:
    max_depth: int = 6
    min_certainty: float = 0.1
    kinds: frozenset = ALL_KINDS
    weights: StepWeights = field(default_factory=StepWeights)
    functional: tuple = ()
    candidate_cap: int = 1000
    context: tuple | None = None

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")

    @classmethod
    def from_config(cls, config: EngineConfig, **kw) -> "ProofParams":
        return cls(max_depth=config.max_depth, min_certainty=config.min_certainty,
                   weights=config.weights, functional=tuple(config.functional),
                   candidate_cap=config.candidate_cap, **kw)


def _strip(cond):
    """The condition without scope or metadata, as used for conclusions."""
    if isinstance(cond, Property):
        return Property(cond.descriptor, cond.argument, cond.operator, cond.referent)
    if isinstance(cond, Relation):
        return Relation(cond.subject, cond.relationship, cond.object)
    return cond


def _with_argument(cond, term):
    if isinstance(cond, Property):
        return Property(cond.descriptor, term, cond.operator, cond.referent)
    return Relation(term, cond.relationship, cond.object)


def _head(cond):
    return cond.argument if isinstance(cond, Property) else cond.subject


def entails(pattern, goal, binding=None) -> list[dict]:
    """Bindings under which ``pattern`` (a rule condition) concludes the ground ``goal``.

    Set operators entail any subset of their referents.
    """
    binding = {} if binding is None else binding
    if isinstance(pattern, Relation) or isinstance(goal, Relation):
        if type(pattern) is not type(goal):
            return []
        b = unify(pattern, goal, binding)
        return [] if b is None else [b]
    if pattern.operator != goal.operator:
        return []
    b = unify(pattern.descriptor, goal.descriptor, binding)
    b = None if b is None else unify(pattern.argument, goal.argument, b)
    if b is None:
        return []
    if pattern.operator not in SET_OPERATORS:
        if len(pattern.referent) != len(goal.referent):
            return []
        for p, g in zip(pattern.referent, goal.referent):
            b = unify(p, g, b)
            if b is None:
                return []
        return [b]
    out = []
    for choice in itertools.product(pattern.referent, repeat=len(goal.referent)):
        nb = b
        for p, g in zip(choice, goal.referent):
            nb = unify(p, g, nb)
            if nb is None:
                break
        if nb is not None and nb not in out:
            out.append(nb)
    return out


def skolemize(rule: Implication, start: int) -> tuple[Implication, int]:
    """Replace consequent-only variables with fresh ``_sk_N`` constants.

    User identifiers must start with a letter, so these names never unify
    with anything a document can mention.
    """
    mapping = {}
    n = start
    for v in sorted(rule.free_variables):
        mapping[v] = Name(f"_sk_{n}")
        n += 1
    if not mapping:
        return rule, n
    return Implication(rule.antecedents, substitute(rule.consequents, mapping), rule.metadata), n


class Reasoner:
    """Backward plausible reasoner over one graph snapshot; memo is per instance."""

    def __init__(self, graph: KnowledgeGraph, params: ProofParams | None = None):
        self.graph = graph
        self.params = params or ProofParams()
        self._best: dict = {}
        self._candidates: dict = {}
        self._rules = []
        n = 0
        for rid, rule in graph.implications():
            sk, n = skolemize(rule, n)
            self._rules.append((rid, sk))

    # -- public ---------------------------------------------------------------

    def prove(self, supposition) -> list[Argument]:
        """Arguments for the supposition and against it (via its contradictions)."""
        out = []
        for ground in self.ground_instances(supposition):
            for step in self.candidates(ground, self.params.max_depth):
                if not step.circular():
                    out.append(Argument(step, Polarity.FOR))
            for contra in self.contradictions(ground):
                for step in self.candidates(contra, self.params.max_depth):
                    if not step.circular():
                        out.append(Argument(step, Polarity.AGAINST))
        return out

    def best(self, cond, depth: int | None = None) -> InferenceStep | None:
        depth = self.params.max_depth if depth is None else depth
        key = (cond, depth)
        if key not in self._best:
            steps = self.candidates(cond, depth)
            best = None
            for s in steps:
                if best is None or s.anchor > best.anchor:
                    best = s
            self._best[key] = best
        return self._best[key]

    def certainty(self, cond, depth: int | None = None) -> Level:
        step = self.best(_strip(cond), depth)
        return Level.NONE if step is None else step.certainty

    def solve(self, pattern) -> list[tuple[dict, Level]]:
        """Bindings of the pattern's variables with the certainty of each instance."""
        out = []
        names = variables(pattern)
        for ground in self.ground_instances(pattern):
            step = self.best(ground)
            if step is None:
                continue
            binding = unify(_strip(pattern), ground, {})
            if binding is not None:
                out.append(({k: binding[k] for k in names if k in binding}, step.certainty))
        return out

    # -- candidate steps ---------------------------------------------------------

    def candidates(self, cond, depth: int) -> list[InferenceStep]:
        cond = _strip(cond)
        key = (cond, depth)
        if key in self._candidates:
            return self._candidates[key]
        kinds = self.params.kinds
        steps = list(self._facts(cond))
        if depth > 0:
            if StepKind.IMPLICATION_FORWARD in kinds:
                steps += self._implication_forward(cond, depth)
            if StepKind.IMPLICATION_BACKWARD in kinds:
                steps += self._implication_backward(cond, depth)
            if StepKind.SPECIALIZATION in kinds:
                steps += self._specialization(cond, depth)
            if StepKind.GENERALIZATION in kinds:
                steps += self._generalization(cond, depth)
            if StepKind.SIMILARITY in kinds:
                steps += self._similarity(cond, depth)
            if StepKind.ANALOGY in kinds:
                steps += self._analogy(cond, depth)
        cutoff = self.params.min_certainty - 1e-12
        steps = [s for s in steps if s.anchor >= cutoff and s.anchor > 0]
        self._candidates[key] = steps
        return steps

    def _in_context(self, statement) -> bool:
        ctx = self.params.context
        scope = getattr(statement, "scope", ())
        return ctx is None or not scope or bool(set(scope) & set(ctx))

    def _facts(self, cond):
        if not isinstance(cond, (Property, Relation)):
            return
        for sid, _ in self.graph.match(cond):
            stored = self.graph[sid]
            if not self._in_context(stored):
                continue
            level = certainty_of(stored)
            yield InferenceStep(StepKind.FACT, cond, (), sid, level.anchor, level)

    def _step(self, kind, cond, premises, sid, weight) -> InferenceStep | None:
        if any(p is None for p in premises):
            return None
        anchor = min([weight] + [p.anchor for p in premises])
        return InferenceStep(kind, cond, tuple(premises), sid, weight, Level.from_anchor(anchor))

    def _rule_weight(self, rule, parameter, default) -> float:
        level = rule.metadata.get(parameter)
        weight = default if level is None else level.anchor
        return min(weight, certainty_of(rule).anchor)

    def _link_weight(self, link, parameters, default) -> float:
        weight = default
        for p in parameters:
            level = link.metadata.get(p)
            if level is not None:
                weight = level.anchor
                break
        return min(weight, certainty_of(link).anchor)

    def _implication_forward(self, cond, depth):
        out = []
        for rid, rule in self._rules:
            if not self._in_context_rule(rule):
                continue
            weight = self._rule_weight(rule, "strength", self.params.weights.implication_forward)
            for cons in rule.consequents:
                for b in entails(cons, cond):
                    for full in self._complete(rule.antecedents, b):
                        premises = [self.best(_strip(substitute(a, full)), depth - 1)
                                    for a in rule.antecedents]
                        step = self._step(StepKind.IMPLICATION_FORWARD, cond, premises, rid, weight)
                        if step is not None:
                            out.append(step)
        return out

    def _implication_backward(self, cond, depth):
        out = []
        for rid, rule in self._rules:
            if not self._in_context_rule(rule):
                continue
            weight = self._rule_weight(rule, "inverse", self.params.weights.implication_backward)
            for ant in rule.antecedents:
                for b in entails(ant, cond):
                    for full in self._complete(rule.consequents, b):
                        premises = [self.best(_strip(substitute(c, full)), depth - 1)
                                    for c in rule.consequents]
                        step = self._step(StepKind.IMPLICATION_BACKWARD, cond, premises, rid, weight)
                        if step is not None:
                            out.append(step)
        return out

    def _in_context_rule(self, rule) -> bool:
        return all(self._in_context(c) for c in rule.antecedents + rule.consequents)

    def _complete(self, conditions, binding) -> list[dict]:
        """Extend ``binding`` so ``conditions`` become ground, using stored facts."""
        pending = [substitute(c, binding) for c in conditions]
        if all(is_ground(c) for c in pending):
            return [binding]
        current = [binding]
        for c in conditions:
            nxt = []
            for b in current:
                inst = substitute(c, b)
                if is_ground(inst):
                    nxt.append(b)
                    continue
                for _, extra in self.graph.match(_strip(inst)):
                    nxt.append({**b, **extra})
                    if len(nxt) >= self.params.candidate_cap:
                        break
            current = nxt
        return [b for b in current if all(is_ground(substitute(c, b)) for c in conditions)]

    def _hierarchy_applicable(self, cond) -> bool:
        head = _head(cond)
        if isinstance(head, (Variable, SubGraph)):
            return False
        return not (isinstance(cond, Relation) and cond.relationship in STRUCTURAL)

    def _specialization(self, cond, depth):
        if not self._hierarchy_applicable(cond):
            return []
        out = []
        for sid, link in self.graph.relations_from(_head(cond), KIND_OF):
            if not self._in_context(link):
                continue
            weight = self._link_weight(link, ("typicality",), self.params.weights.specialization)
            premise = self.best(_with_argument(cond, link.object), depth - 1)
            step = self._step(StepKind.SPECIALIZATION, cond, [premise], sid, weight)
            if step is not None:
                out.append(step)
        return out

    def _generalization(self, cond, depth):
        if not self._hierarchy_applicable(cond):
            return []
        out = []
        for sid, link in self.graph.relations_to(_head(cond), KIND_OF):
            if not self._in_context(link):
                continue
            weight = self._link_weight(link, ("dominance", "multiplicity"),
                                       self.params.weights.generalization)
            premise = self.best(_with_argument(cond, link.subject), depth - 1)
            step = self._step(StepKind.GENERALIZATION, cond, [premise], sid, weight)
            if step is not None:
                out.append(step)
        return out

    def _similarity(self, cond, depth):
        if not self._hierarchy_applicable(cond):
            return []
        head = _head(cond)
        gate = cond.descriptor if isinstance(cond, Property) else cond.relationship
        links = [(sid, r, r.object) for sid, r in self.graph.relations_from(head, SIMILAR_TO)]
        links += [(sid, r, r.subject) for sid, r in self.graph.relations_to(head, SIMILAR_TO)]
        out = []
        for sid, link, other in links:
            if other == head or (link.scope and gate not in link.scope):
                continue
            weight = self._link_weight(link, ("similarity",), self.params.weights.similarity)
            premise = self.best(_with_argument(cond, other), depth - 1)
            step = self._step(StepKind.SIMILARITY, cond, [premise], sid, weight)
            if step is not None:
                out.append(step)
        return out

    def _analogy(self, cond, depth):
        if not isinstance(cond, Relation):
            return []
        out = []
        for sid, an in self.graph.analogies():
            if not is_ground(an):
                continue
            pairs = []
            if (an.c, an.d) == (cond.subject, cond.object):
                pairs.append((an.a, an.b))
            if (an.a, an.b) == (cond.subject, cond.object):
                pairs.append((an.c, an.d))
            for x, y in pairs:
                premise = self.best(Relation(x, cond.relationship, y), depth - 1)
                step = self._step(StepKind.ANALOGY, cond, [premise], sid,
                                  self.params.weights.analogy)
                if step is not None:
                    out.append(step)
        return out

    # -- contradictions and variables ------------------------------------------

    def contradictions(self, cond) -> list:
        """Conditions whose truth would contradict ``cond``."""
        cond = _strip(cond)
        out = []
        if isinstance(cond, Property):
            if cond.operator == "includes":
                out.append(Property(cond.descriptor, cond.argument, "excludes", cond.referent))
            elif cond.operator == "excludes":
                out.append(Property(cond.descriptor, cond.argument, "includes", cond.referent))
            elif cond.operator == "is" and _is_functional(cond.descriptor, self.params.functional):
                for ref in self._values(cond.descriptor, "is"):
                    if ref != cond.referent:
                        out.append(Property(cond.descriptor, cond.argument, "is", ref))
        elif isinstance(cond, Relation) and _is_functional(cond.relationship,
                                                          self.params.functional):
            for _, r in self.graph.relations(cond.relationship):
                if r.object != cond.object:
                    other = Relation(cond.subject, cond.relationship, r.object)
                    if other not in out:
                        out.append(other)
        out.append(Relation(SubGraph((cond,)), IS_A, LIE))
        return out

    def _values(self, descriptor, operator) -> list[tuple]:
        out = []
        for _, s in self.graph.properties():
            if s.descriptor == descriptor and s.operator == operator and s.referent not in out:
                out.append(s.referent)
        for _, rule in self._rules:
            for c in rule.consequents:
                if (isinstance(c, Property) and c.descriptor == descriptor
                        and c.operator == operator and is_ground(c.referent)
                        and c.referent not in out):
                    out.append(c.referent)
        return out

    def ground_instances(self, pattern) -> list:
        pattern = _strip(pattern)
        names = variables(pattern)
        if not names:
            return [pattern]
        domains = {n: self._domain(pattern, n) for n in names}
        out = []
        for combo in itertools.product(*(domains[n] for n in names)):
            out.append(substitute(pattern, dict(zip(names, combo))))
            if len(out) >= self.params.candidate_cap:
                break
        return out

    def _domain(self, pattern, name) -> list:
        """Terms that could fill variable ``name`` in ``pattern``."""
        terms = []

        def add(t):
            if t is not None and not isinstance(t, Variable) and t not in terms:
                terms.append(t)

        sources = [s for _, s in self.graph.items()]
        for _, rule in self._rules:
            sources.extend(rule.antecedents + rule.consequents)
        var = Variable(name)
        for s in sources:
            if isinstance(pattern, Property) and isinstance(s, Property):
                if pattern.argument == var:
                    add(s.argument)
                if pattern.descriptor == var:
                    add(s.descriptor)
                for p in pattern.referent:
                    if p == var:
                        for r in s.referent:
                            add(r)
            elif isinstance(pattern, Relation) and isinstance(s, Relation):
                if var in (pattern.subject, pattern.object):
                    add(s.subject)
                    add(s.object)
            if isinstance(s, Relation) and s.relationship in STRUCTURAL and var == _head(pattern):
                add(s.subject)
                add(s.object)
        return terms


def _is_functional(name, functional) -> bool:
    return str(name) in {str(f) for f in functional}


# ------------------------------------------------------------ functions


def prove(graph: KnowledgeGraph, supposition, params: ProofParams | None = None) -> list[Argument]:
    return Reasoner(graph, params).prove(supposition)


def _kind_steps(graph, supposition, params, kind) -> list[InferenceStep]:
    params = params or ProofParams()
    r = Reasoner(graph, params)
    return [s for g in r.ground_instances(supposition)
            for s in r.candidates(g, params.max_depth) if s.kind is kind]


def infer_specialization(graph, supposition, params: ProofParams | None = None):
    return _kind_steps(graph, supposition, params, StepKind.SPECIALIZATION)


def infer_generalization(graph, supposition, params: ProofParams | None = None):
    return _kind_steps(graph, supposition, params, StepKind.GENERALIZATION)


def infer_similarity(graph, supposition, params: ProofParams | None = None):
    return _kind_steps(graph, supposition, params, StepKind.SIMILARITY)


# --------------------------------------------------------------- analogy


class AnalogyResult(list):
    """Ranked ``(term, Level)`` candidates; ``diagnostic`` explains an empty list."""

    def __init__(self, items=(), diagnostic: str | None = None):
        super().__init__(items)
        self.diagnostic = diagnostic


def complete_analogy(graph: KnowledgeGraph, a, b, c,
                     weight: float = StepWeights.analogy) -> AnalogyResult:
    """Candidates ``d`` for ``a:b::c:d`` ranked by shared relationships, then certainty."""
    links = []
    for _, r in graph.relations():
        if r.subject == a and r.object == b:
            links.append((r.relationship, +1, r))
        elif r.subject == b and r.object == a:
            links.append((r.relationship, -1, r))
    if not links:
        return AnalogyResult(diagnostic=f"no relation links {a} and {b}")
    support: dict = {}
    anchor: dict = {}
    for rel, direction, first in links:
        for _, r in graph.relations(rel):
            if direction > 0 and r.subject == c:
                d = r.object
            elif direction < 0 and r.object == c:
                d = r.subject
            else:
                continue
            support.setdefault(d, set()).add((rel, direction))
            cert = min(certainty_of(first).anchor, certainty_of(r).anchor)
            anchor[d] = min(anchor.get(d, 1.0), cert)
    if not support:
        return AnalogyResult(diagnostic=f"no relation shared between {a}:{b} and {c}")
    order = list(support)
    ranked = sorted(order, key=lambda d: (-len(support[d]), -anchor[d], order.index(d)))
    return AnalogyResult([(d, Level.from_anchor(min(weight, anchor[d]))) for d in ranked])


def verify_analogy(graph: KnowledgeGraph, a, b, c, d) -> bool:
    return any(x == d for x, _ in complete_analogy(graph, a, b, c))


__all__ = [
    "Argument", "InferenceStep", "Polarity", "ProofParams", "Reasoner", "StepKind",
    "AnalogyResult", "complete_analogy", "verify_analogy", "entails", "skolemize",
    "prove", "infer_specialization", "infer_generalization", "infer_similarity",
]
