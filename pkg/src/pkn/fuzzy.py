"""
Scalar ranges, fuzzification, defuzzification, connectives, modifiers and
fuzzy quantifiers.

A scalar range partitions a numeric quantity into ordered terms such as
``infant, child, adult``. Membership is crisp inside each term and
crossfades linearly across a window centred on every internal boundary::

    m_upper(v) = clip((v - boundary + w) / (2 w), 0, 1),  m_lower = 1 - m_upper

where ``w`` (the half-width) defaults to 10% of the narrower adjacent term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (DegenerateVector, EmptyReferenceClass, MissingTermBounds,
                     NonContiguousRange, OutOfRange, UnknownTerm)
from .model import Name, Number, Property

DEFAULT_CEILING = 120.0
DEFAULT_WINDOW_FRACTION = 0.1
# integer partitions such as 0..4 / 5..17 leave a gap of one unit
ADJACENCY_GAP = 1.0

# exponent applied to the base membership when the graph gives no definition
HEDGES = {"very": 2.0, "extremely": 3.0, "somewhat": 0.5}


@dataclass(frozen=True)
class TermBounds:
    name: Name
    lower: float
    upper: float

    @property
    def midpoint(self) -> float:
        return (self.lower + self.upper) / 2.0

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class ScalarRange:
    quantity: Name
    scope: Name | None
    terms: tuple
    half_width: float | None = None
    window_fraction: float = DEFAULT_WINDOW_FRACTION

    def __post_init__(self):
        if not self.terms:
            raise MissingTermBounds("a scalar range needs at least one term")
        for t in self.terms:
            if t.lower > t.upper:
                raise NonContiguousRange(f"{t.name}: lower bound {t.lower} above upper {t.upper}")
        for a, b in zip(self.terms, self.terms[1:]):
            gap = b.lower - a.upper
            if gap < 0 or gap > ADJACENCY_GAP:
                raise NonContiguousRange(
                    f"{a.name} ends at {a.upper} but {b.name} starts at {b.lower}")
        if not 0 < self.window_fraction <= 0.5:
            raise ValueError("window_fraction must lie in (0, 0.5]")

    @property
    def names(self) -> tuple:
        return tuple(t.name for t in self.terms)

    @property
    def lower(self) -> float:
        return self.terms[0].lower

    @property
    def upper(self) -> float:
        return self.terms[-1].upper

    @property
    def boundaries(self) -> np.ndarray:
        return np.array([(a.upper + b.lower) / 2.0 for a, b in zip(self.terms, self.terms[1:])])

    @property
    def half_widths(self) -> np.ndarray:
        if self.half_width is not None:
            return np.full(len(self.terms) - 1, float(self.half_width))
        return np.array([self.window_fraction * min(a.width, b.width)
                         for a, b in zip(self.terms, self.terms[1:])])

    @property
    def midpoints(self) -> np.ndarray:
        return np.array([t.midpoint for t in self.terms])

    def index(self, term) -> int:
        name = term if isinstance(term, Name) else Name.parse(str(term))
        for i, t in enumerate(self.terms):
            if t.name == name:
                return i
        raise UnknownTerm(f"{name} is not a term of the {self.quantity} range")

    def __contains__(self, term) -> bool:
        try:
            self.index(term)
        except UnknownTerm:
            return False
        return True


@dataclass(frozen=True, eq=False)
class MembershipVector:
    terms: tuple
    values: np.ndarray

    def __getitem__(self, key) -> float:
        if isinstance(key, int):
            return float(self.values[key])
        name = key if isinstance(key, Name) else Name.parse(str(key))
        return float(self.values[self.terms.index(name)])

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(float(v) for v in self.values)

    def as_tuple(self) -> tuple:
        return tuple(float(v) for v in self.values)

    def __repr__(self):
        inner = ", ".join(f"{t}={v:.3g}" for t, v in zip(self.terms, self.values))
        return f"MembershipVector({inner})"


# ------------------------------------------------------------ building


def build_range(graph, quantity, scope=None, *, ceiling: float = DEFAULT_CEILING,
                symbols: dict | None = None, half_width: float | None = None,
                window_fraction: float = DEFAULT_WINDOW_FRACTION) -> ScalarRange:
    """Assemble a ScalarRange from ``range of Q is ...`` plus per-term bounds.

    Symbolic upper bounds (``age-at-death``) resolve through ``symbols`` and
    otherwise to ``ceiling``.
    """
    quantity = _as_name(quantity)
    scope = _as_name(scope) if scope is not None else None
    listing = None
    for _, s in graph.properties():
        if (s.descriptor == Name("range") and s.argument == quantity and s.operator == "is"
                and _in_scope(s, scope)):
            listing = s
            break
    if listing is None:
        raise MissingTermBounds(f"no 'range of {quantity}' statement"
                                + (f" for {scope}" if scope else ""))
    symbols = symbols or {}
    terms = []
    for term in listing.referent:
        bounds = None
        for _, s in graph.properties():
            if (s.descriptor == quantity and s.argument == term and s.operator == "is"
                    and len(s.referent) == 2 and _in_scope(s, scope)):
                bounds = s.referent
                break
        if bounds is None:
            raise MissingTermBounds(f"no bounds given for {term} in the {quantity} range")
        lo, hi = bounds
        if not isinstance(lo, Number):
            raise MissingTermBounds(f"lower bound of {term} must be numeric")
        if isinstance(hi, Number):
            upper = hi.value
        else:
            upper = float(symbols.get(str(hi), ceiling))
        terms.append(TermBounds(term, lo.value, upper))
    if scope is None and listing.scope:
        scope = listing.scope[0]
    return ScalarRange(quantity, scope, tuple(terms), half_width, window_fraction)


def find_ranges(graph, quantity, **kw) -> list[ScalarRange]:
    """Every range declared for ``quantity``, one per declared scope."""
    quantity = _as_name(quantity)
    out = []
    for _, s in graph.properties():
        if s.descriptor == Name("range") and s.argument == quantity and s.operator == "is":
            out.append(build_range(graph, quantity, s.scope[0] if s.scope else None, **kw))
    return out


def _in_scope(statement, scope) -> bool:
    return scope is None or scope in statement.scope


def _as_name(x) -> Name:
    return x if isinstance(x, Name) else Name.parse(str(x))


# ------------------------------------------------ fuzzify / defuzzify


def _levels(rng: ScalarRange, values: np.ndarray) -> np.ndarray:
    level = np.zeros_like(values, dtype=float)
    for b, w in zip(rng.boundaries, rng.half_widths):
        if w > 0:
            level += np.clip((values - b + w) / (2 * w), 0.0, 1.0)
        else:
            level += np.where(values > b, 1.0, np.where(values == b, 0.5, 0.0))
    return level


def fuzzify_many(rng: ScalarRange, values) -> np.ndarray:
    """Memberships for an array of values, shape ``(n, len(rng.terms))``."""
    values = np.asarray(values, dtype=float)
    if np.any(values < rng.lower) or np.any(values > rng.upper):
        bad = values[(values < rng.lower) | (values > rng.upper)][0]
        raise OutOfRange(f"{bad} lies outside [{rng.lower}, {rng.upper}]")
    level = _levels(rng, values.reshape(-1))
    idx = np.arange(len(rng.terms))
    m = np.clip(1.0 - np.abs(level[:, None] - idx[None, :]), 0.0, 1.0)
    return m / m.sum(axis=1, keepdims=True)


def fuzzify(rng: ScalarRange, value: float) -> MembershipVector:
    return MembershipVector(rng.names, fuzzify_many(rng, [value])[0])


def membership(rng: ScalarRange, term, value: float) -> float:
    return float(fuzzify_many(rng, [value])[0, rng.index(term)])


def defuzzify(rng: ScalarRange, mv) -> float:
    """Centroid of term midpoints weighted by membership."""
    values = np.asarray(mv.values if isinstance(mv, MembershipVector) else mv, dtype=float)
    if values.shape != (len(rng.terms),):
        raise ValueError(f"expected {len(rng.terms)} memberships, got {values.shape}")
    total = values.sum()
    if total <= 0:
        raise DegenerateVector("all memberships are zero")
    return float(np.dot(values / total, rng.midpoints))


# ------------------------------------------------------------ connectives


def fuzzy_and(a, b):
    return np.minimum(a, b)


def fuzzy_or(a, b):
    return np.maximum(a, b)


def fuzzy_not(a):
    return 1.0 - np.asarray(a, dtype=float) if np.ndim(a) else 1.0 - a


# -------------------------------------------------------------- modifiers


def apply_modifier(modifier, rng: ScalarRange, term, x, graph=None) -> float:
    """Membership of ``modifier:term`` for a value or a membership vector.

    A definition stated in ``graph`` (``age of very:old greater-than 75``)
    wins over the default hedge, which raises the base membership to a
    power (``very`` squares it). Chained modifiers apply left to right.
    """
    modifier = _as_name(modifier)
    chain = modifier.prefixes + (modifier.base,)
    term = _as_name(term)
    return modified_membership(rng, Name(term.base, chain + term.prefixes), x, graph)


def modified_membership(rng: ScalarRange, term: Name, x, graph=None) -> float:
    """Membership of a possibly prefixed term such as ``very:old``."""
    if graph is not None and term.prefixes:
        definition = _definition(graph, rng, term)
        if definition is not None:
            value = x if not isinstance(x, MembershipVector) else defuzzify(rng, x)
            return _apply_definition(rng, definition, float(value), graph)
    base = term.unmodified
    if isinstance(x, MembershipVector):
        m = x[base] if base in x.terms else _missing(rng, base)
    else:
        m = membership(rng, base, float(x))
    for prefix in term.prefixes:
        if prefix not in HEDGES:
            raise UnknownTerm(f"no definition or default meaning for modifier {prefix!r}")
        m = m ** HEDGES[prefix]
    return float(m)


def _missing(rng, base):
    raise UnknownTerm(f"{base} is not a term of the {rng.quantity} range")


def _definition(graph, rng: ScalarRange, term: Name) -> Property | None:
    for _, s in graph.properties():
        if (s.descriptor == rng.quantity and s.argument == term
                and (rng.scope is None or not s.scope or rng.scope in s.scope)):
            return s
    return None


def _apply_definition(rng, s: Property, value: float, graph) -> float:
    ref = s.referent
    if s.operator == "greater-than" and isinstance(ref[0], Number):
        return 1.0 if value > ref[0].value else 0.0
    if s.operator == "less-than" and isinstance(ref[0], Number):
        return 1.0 if value < ref[0].value else 0.0
    if s.operator == "is" and len(ref) == 2 and all(isinstance(r, Number) for r in ref):
        return 1.0 if ref[0].value <= value <= ref[1].value else 0.0
    if s.operator == "is" and len(ref) == 1 and isinstance(ref[0], Name):
        return modified_membership(rng, ref[0], value, graph)
    raise UnknownTerm(f"cannot interpret definition of {s.argument}")


# ------------------------------------------------------------ quantifiers


@dataclass(frozen=True)
class QuantifierThresholds:
    few: float = 0.2
    many: float = 0.5
    most: float = 0.75


class QuantifierResult(NamedTuple):
    holds: bool
    ratio: float


def quantifier_holds(kind: str, where_count: int, from_count: int,
                     thresholds: QuantifierThresholds = QuantifierThresholds()) -> QuantifierResult:
    if from_count <= 0:
        raise EmptyReferenceClass("the 'from' clause matched nothing")
    if not 0 <= where_count <= from_count:
        raise ValueError(f"where-count {where_count} must lie in [0, {from_count}]")
    ratio = where_count / from_count
    if kind == "few":
        holds = 0 < ratio <= thresholds.few
    elif kind == "many":
        holds = ratio >= thresholds.many
    elif kind == "most":
        holds = ratio >= thresholds.most
    else:
        raise ValueError(f"unknown quantifier {kind!r}")
    return QuantifierResult(bool(holds), ratio)


def make_range(quantity: str, bounds: Sequence[tuple], scope: str | None = None,
               **kw) -> ScalarRange:
    """Build a range directly from ``(term, lower, upper)`` triples."""
    terms = tuple(TermBounds(Name.parse(n), float(lo), float(hi)) for n, lo, hi in bounds)
    return ScalarRange(Name.parse(quantity), Name.parse(scope) if scope else None, terms, **kw)
