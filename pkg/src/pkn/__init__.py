"""Plausible Knowledge Notation: parsing, fuzzy queries, plausible inference and RDF export."""

from .argumentation import (AttackEdge, AttackKind, Stance, Verdict, aggregate, ask,
                            classify_counter, contradicts, counter_arguments, explain)
from .config import EngineConfig, StepWeights
from .errors import (DegenerateVector, EmptyReferenceClass, FuzzyError, InvalidStatement,
                     LexError, MissingFromClause, MissingTermBounds, NonContiguousRange,
                     OutOfRange, ParseError, PKNError, UnboundComparison, UnindexablePattern,
                     UnknownTerm)
from .fuzzy import (MembershipVector, QuantifierThresholds, ScalarRange, build_range,
                    defuzzify, find_ranges, fuzzify, fuzzy_and, fuzzy_not, fuzzy_or,
                    make_range, membership, quantifier_holds)
from .graph import KnowledgeGraph
from .model import (Analogy, Implication, Level, Metadata, Name, Number, Property, Query,
                    Relation, SubGraph, Variable)
from .parser import (parse_condition, parse_document, parse_query, parse_statement,
                     parse_with_recovery, serialize, tokenize)
from .query import QueryEngine, QueryResult, run_query
from .rdf import to_triples, to_turtle
from .reasoner import (Argument, InferenceStep, Polarity, ProofParams, Reasoner, StepKind,
                       complete_analogy, prove, verify_analogy)

__version__ = "0.1.0"
