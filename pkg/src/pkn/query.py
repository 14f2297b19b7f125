"""
Evaluation of ``which``/``count``/``few``/``many``/``most`` queries.

Conditions are joined left to right over a growing list of bindings.
Comparison operators read numeric ``is`` facts; a referent naming a fuzzy
term (``age of ?x is very:old``) is accepted either by a symbolic fact or
when the bound number's membership in that term reaches the acceptance
threshold alpha.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .config import EngineConfig
from .errors import UnboundComparison
from .fuzzy import find_ranges, modified_membership, quantifier_holds
from .model import Name, Number, Property, Query, Relation, Variable, substitute, variables

COMPARISONS = {
    "greater-than": lambda a, b: a > b,
    "less-than": lambda a, b: a < b,
}

# cannot collide with user variables: identifiers never contain spaces
_VALUE = Variable(" value")

Prover = Callable[[object], list]


@dataclass
class BindingSet:
    """Deduplicated, insertion-ordered variable bindings."""

    bindings: list = field(default_factory=list)

    def __post_init__(self):
        seen, unique = set(), []
        for b in self.bindings:
            key = _key(b)
            if key not in seen:
                seen.add(key)
                unique.append(b)
        self.bindings = unique

    def __len__(self):
        return len(self.bindings)

    def __iter__(self):
        return iter(self.bindings)

    def __getitem__(self, i):
        return self.bindings[i]

    def project(self, var: str) -> list:
        out = []
        for b in self.bindings:
            v = b.get(var)
            if v is not None and v not in out:
                out.append(v)
        return out


def _key(binding: dict) -> tuple:
    return tuple(sorted(binding.items(), key=lambda kv: kv[0]))


class QueryEngine:
    """Evaluates conditions against one graph snapshot."""

    def __init__(self, graph, config: EngineConfig | None = None, prover: Prover | None = None):
        self.graph = graph
        self.config = config or EngineConfig()
        self.prover = prover
        self._ranges: dict = {}

    # -- conditions -------------------------------------------------------

    def evaluate(self, conditions: Iterable) -> BindingSet:
        conditions = list(conditions)
        if not conditions:
            raise ValueError("at least one condition is required")
        current = [{}]
        for cond in conditions:
            nxt = []
            for b in current:
                for extra in self._solve(substitute(cond, b)):
                    nxt.append({**b, **extra})
            current = BindingSet(nxt).bindings
            if not current:
                break
        return BindingSet(current)

    def _solve(self, cond) -> list[dict]:
        if isinstance(cond, Relation):
            found = [b for _, b in self.graph.match(cond)]
        elif isinstance(cond, Property) and cond.operator in COMPARISONS:
            found = self._compare(cond)
        elif isinstance(cond, Property):
            found = [b for _, b in self.graph.match(cond)]
            found += self._fuzzy(cond)
        else:
            raise TypeError(f"unsupported condition {cond!r}")
        if self.prover is not None:
            found += self.prover(cond)
        return found

    def _compare(self, cond: Property) -> list[dict]:
        if len(cond.referent) != 1:
            raise ValueError(f"{cond.operator} takes a single referent")
        ref = cond.referent[0]
        if isinstance(ref, Variable) or (isinstance(cond.descriptor, Variable)
                                         and isinstance(cond.argument, Variable)):
            raise UnboundComparison(f"comparison over an unbound variable in {cond}")
        if not isinstance(ref, Number):
            return []
        test = COMPARISONS[cond.operator]
        out = []
        for b in self._numeric_facts(cond):
            value = b.pop(_VALUE.name)
            if test(value.value, ref.value):
                out.append(b)
        return out

    def _numeric_facts(self, cond: Property) -> list[dict]:
        pattern = Property(cond.descriptor, cond.argument, "is", (_VALUE,), cond.scope)
        return [b for _, b in self.graph.match(pattern) if isinstance(b[_VALUE.name], Number)]

    def _fuzzy(self, cond: Property) -> list[dict]:
        if (cond.operator != "is" or len(cond.referent) != 1
                or not isinstance(cond.referent[0], Name)
                or not isinstance(cond.descriptor, Name)):
            return []
        term = cond.referent[0]
        rng = next((r for r in self.ranges(cond.descriptor) if term.unmodified in r), None)
        if rng is None:
            return []
        out = []
        for b in self._numeric_facts(cond):
            value = b.pop(_VALUE.name).value
            if not rng.lower <= value <= rng.upper:
                continue
            if modified_membership(rng, term, value, self.graph) >= self.config.alpha:
                out.append(b)
        return out

    def ranges(self, quantity: Name) -> list:
        if quantity not in self._ranges:
            self._ranges[quantity] = find_ranges(self.graph, quantity, ceiling=self.config.ceiling,
                                                 window_fraction=self.config.window_fraction)
        return self._ranges[quantity]

    # -- queries -----------------------------------------------------------

    def run(self, query: Query) -> "QueryResult":
        head = query.head.name
        if head not in variables(query.where):
            raise ValueError(f"head variable ?{head} does not occur in the where clause")
        where = self.evaluate(query.where)
        values = where.project(head)
        from_values = None
        if query.from_:
            if head not in variables(query.from_):
                raise ValueError(f"head variable ?{head} does not occur in the from clause")
            from_values = self.evaluate(query.from_).project(head)
            allowed = set(from_values)
            values = [v for v in values if v in allowed]
        result = QueryResult(query, values, where, len(values))
        if query.quantifier in ("few", "many", "most"):
            verdict = quantifier_holds(query.quantifier, len(values), len(from_values),
                                       self.config.thresholds)
            result.holds = verdict.holds
            result.from_count = len(from_values)
            result.ratio = verdict.ratio
        elif from_values is not None:
            result.from_count = len(from_values)
        return result


@dataclass
class QueryResult:
    query: Query
    values: list
    bindings: BindingSet
    count: int
    holds: bool | None = None
    from_count: int | None = None
    ratio: float | None = None

    @property
    def where_count(self) -> int:
        return self.count

    def render(self) -> str:
        q = self.query.quantifier
        if q == "which":
            return "".join(f"{v}\n" for v in self.values)
        if q == "count":
            return f"{self.count}\n"
        return f"{'true' if self.holds else 'false'} ({self.count}/{self.from_count}, {self.ratio:.2f})\n"


def evaluate_conditions(graph, conditions, config: EngineConfig | None = None) -> BindingSet:
    return QueryEngine(graph, config).evaluate(conditions)


def run_query(graph, query: Query, config: EngineConfig | None = None,
              prover: Prover | None = None) -> QueryResult:
    return QueryEngine(graph, config, prover).run(query)
