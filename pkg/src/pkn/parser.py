"""
Tokenizer, recursive-descent parser and canonical serializer for PKN text.

Grammar (one statement per line; newlines inside braces or parentheses do
not end the enclosing statement)::

    document    := { statement | query } separated by newlines
    statement   := analogy | implication | condition [meta]
    analogy     := atom ":" atom "::" atom ":" (atom | "?")
    implication := condition {"and" condition} "implies" condition {"and" condition} [meta]
    condition   := property | relation
    property    := term "of" term OPERATOR term {"," term} ["for" name {"," name}]
    relation    := term NAME term ["for" name {"," name}]
    meta        := "(" IDENT LEVEL {"," IDENT LEVEL} ")"
    query       := QUANTIFIER VAR "where" conditions ["from" conditions]
    term        := name | NUMBER | VAR | "{" statement {newline statement} "}"
    name        := IDENT {":" IDENT}

A line is classified in this order: contains ``::`` -> analogy, contains
``implies`` -> implication, second token ``of`` -> property, else relation.
Keywords are contextual and remain usable as ordinary names. ``#`` starts a
comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import LexError, MissingFromClause, ParseError
from .model import (QUANTIFIERS, Analogy, Implication, Level, Metadata, Name, Number,
                    Property, Query, Relation, SubGraph, Variable, format_number)

KEYWORDS = frozenset({
    "of", "includes", "is", "implies", "and", "for", "where", "from",
    "which", "count", "few", "many", "most",
    "is-a", "kind-of", "similar-to", "greater-than", "less-than",
})

_TOKEN_RE = re.compile(r"""
    (?P<newline>\n)
  | (?P<space>[ \t\r\f]+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>-?(?:0|[1-9][0-9]*)(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?)
  | (?P<identifier>[A-Za-z][A-Za-z0-9_-]*)
  | (?P<variable>\?(?:[A-Za-z][A-Za-z0-9_-]*)?)
  | (?P<double_colon>::)
  | (?P<colon>:)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<lbrace>\{)
  | (?P<rbrace>\})
  | (?P<comma>,)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    line: int
    column: int

    @property
    def is_name(self) -> bool:
        return self.kind in ("identifier", "keyword")

    def __repr__(self):
        return f"{self.kind}({self.lexeme})"


def _lex(text: str):
    """Yield tokens; illegal characters come out as ``error`` tokens."""
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            yield Token("error", text[pos], line, pos - line_start + 1)
            pos += 1
            continue
        kind = m.lastgroup
        lexeme = m.group()
        column = pos - line_start + 1
        if kind == "identifier" and lexeme in KEYWORDS:
            kind = "keyword"
        if kind == "double_colon":
            kind = "double-colon"
        if kind not in ("space", "comment"):
            yield Token(kind, lexeme, line, column)
        pos = m.end()
        if kind == "newline":
            line += 1
            line_start = pos


def tokenize(text: str) -> list[Token]:
    """Split PKN text into tokens. Raises :class:`LexError` on illegal characters."""
    tokens = []
    for tok in _lex(text):
        if tok.kind == "error":
            raise LexError(f"illegal character {tok.lexeme!r}", tok.line, tok.column)
        tokens.append(tok)
    return tokens


# ---------------------------------------------------------------- parser


@dataclass
class ParseResult:
    items: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def statements(self) -> list:
        return [x for x in self.items if not isinstance(x, Query)]

    @property
    def queries(self) -> list:
        return [x for x in self.items if isinstance(x, Query)]


def _split_lines(tokens: list[Token]) -> list[list[Token]]:
    groups, current, depth = [], [], 0
    for tok in tokens:
        if tok.kind == "newline" and depth <= 0:
            if current:
                groups.append(current + [tok])
            current, depth = [], 0
            continue
        if tok.kind in ("lparen", "lbrace"):
            depth += 1
        elif tok.kind in ("rparen", "rbrace"):
            depth -= 1
        current.append(tok)
    if current:
        groups.append(current)
    return groups


class _Parser:
    def __init__(self, tokens: list[Token], text_end: tuple[int, int] = (1, 1)):
        self.toks = list(tokens)
        self.pos = 0
        self.limit = len(self.toks)
        self.text_end = text_end

    # -- cursor helpers ---------------------------------------------------

    def peek(self, offset=0) -> Token | None:
        i = self.pos + offset
        return self.toks[i] if i < self.limit else None

    def at(self, kind, lexeme=None, offset=0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.kind == kind and (lexeme is None or tok.lexeme == lexeme)

    def at_keyword(self, word) -> bool:
        tok = self.peek()
        return tok is not None and tok.is_name and tok.lexeme == word

    def advance(self) -> Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def error(self, message, expected=()):
        tok = self.peek()
        if tok is None:
            if self.limit < len(self.toks):
                tok = self.toks[self.limit]
            elif self.toks:
                tok = self.toks[-1]
        if tok is None:
            line, col = self.text_end
        else:
            line, col = tok.line, tok.column
        found = "end of statement" if self.peek() is None else repr(self.peek().lexeme)
        raise ParseError(f"{message}, found {found}", line, col, expected)

    def expect(self, kind, lexeme=None, label=None):
        if self.at(kind, lexeme):
            return self.advance()
        self.error(f"expected {label or lexeme or kind}", (label or lexeme or kind,))

    def expect_keyword(self, word):
        if self.at_keyword(word):
            return self.advance()
        self.error(f"expected {word!r}", (word,))

    def extent(self, start: int) -> int:
        """End index of the statement starting at ``start``."""
        depth = 0
        i = start
        while i < self.limit:
            k = self.toks[i].kind
            if k in ("lparen", "lbrace"):
                depth += 1
            elif k in ("rparen", "rbrace"):
                if depth == 0:
                    break
                depth -= 1
            elif k == "newline" and depth == 0:
                break
            i += 1
        return i

    def top_level_kinds(self, start: int, end: int):
        depth = 0
        for tok in self.toks[start:end]:
            if tok.kind in ("lparen", "lbrace"):
                depth += 1
            elif tok.kind in ("rparen", "rbrace"):
                depth -= 1
            elif depth == 0:
                yield tok

    # -- entry points ----------------------------------------------------------

    def item(self, allow_query=True):
        """Parse one line-level statement or query and require the line to end."""
        end = self.extent(self.pos)
        saved = self.limit
        self.limit = end
        if allow_query and self.at("keyword") and self.peek().lexeme in QUANTIFIERS \
                and self.at("variable", offset=1):
            result = self.query()
        else:
            result = self.statement()
        if self.pos < self.limit:
            self.error("unexpected token", ("end of statement",))
        self.limit = saved
        return result

    def statement(self):
        kinds = list(self.top_level_kinds(self.pos, self.limit))
        if any(t.kind == "double-colon" for t in kinds):
            return self.analogy()
        if any(t.is_name and t.lexeme == "implies" for t in kinds):
            return self.implication()
        cond = self.condition()
        meta = self.metadata()
        if meta:
            cond = _with_meta(cond, meta)
        return cond

    # -- statements --------------------------------------------------------------

    def analogy(self):
        a = self.atom()
        self.expect("colon", label="':'")
        b = self.atom()
        self.expect("double-colon", label="'::'")
        c = self.atom()
        self.expect("colon", label="':'")
        d = self.atom(anonymous_ok=True)
        terms = (a, b, c, d)
        if sum(isinstance(t, Variable) for t in terms) > 1:
            self.error("an analogy may leave only one position open")
        return Analogy(*terms)

    def atom(self, anonymous_ok=False):
        tok = self.peek()
        if tok is None:
            self.error("expected analogy term", ("name", "number", "variable"))
        if tok.is_name:
            self.advance()
            return Name(tok.lexeme)
        if tok.kind == "number":
            self.advance()
            return Number(float(tok.lexeme))
        if tok.kind == "variable":
            self.advance()
            name = tok.lexeme[1:]
            if not name and not anonymous_ok:
                self.pos -= 1
                self.error("anonymous '?' is only allowed as the last analogy term", ("?name",))
            return Variable(name)
        self.error("expected analogy term", ("name", "number", "variable"))

    def implication(self):
        antecedents = self.conditions()
        self.expect_keyword("implies")
        consequents = self.conditions()
        meta = self.metadata()
        return Implication(tuple(antecedents), tuple(consequents), meta or Metadata())

    def conditions(self):
        conds = [self.condition()]
        while self.at_keyword("and"):
            self.advance()
            conds.append(self.condition())
        return conds

    def condition(self):
        first = self.term()
        if self.at_keyword("of"):
            self.advance()
            argument = self.term()
            tok = self.peek()
            if tok is None or not tok.is_name:
                self.error("expected operator", ("operator",))
            operator = self.advance().lexeme
            referent = [self.term(what="referent")]
            while self.at("comma"):
                self.advance()
                referent.append(self.term(what="referent"))
            scope = self.scope()
            return Property(first, argument, operator, tuple(referent), scope)
        tok = self.peek()
        if tok is None or not tok.is_name:
            self.error("expected relationship or 'of'", ("of", "relationship"))
        relationship = self.name()
        obj = self.term(what="object")
        scope = self.scope()
        return Relation(first, relationship, obj, scope)

    def scope(self) -> tuple:
        if not self.at_keyword("for"):
            return ()
        self.advance()
        names = [self.name()]
        while self.at("comma"):
            self.advance()
            names.append(self.name())
        return tuple(names)

    def metadata(self) -> Metadata | None:
        if not self.at("lparen"):
            return None
        self.advance()
        entries = []
        while True:
            tok = self.peek()
            if tok is None or not tok.is_name:
                self.error("expected parameter name", ("parameter",))
            key = self.advance()
            tok = self.peek()
            levels = tuple(lv.value for lv in Level)
            if tok is None or tok.lexeme not in levels:
                self.error(f"expected a level for {key.lexeme!r}", levels)
            self.advance()
            if any(k == key.lexeme for k, _ in entries):
                self.pos -= 2
                self.error(f"duplicate parameter {key.lexeme!r}")
            entries.append((key.lexeme, Level(tok.lexeme)))
            if self.at("comma"):
                self.advance()
                continue
            self.expect("rparen", label="')'")
            return Metadata(tuple(entries))

    # -- terms -------------------------------------------------------------------

    def name(self) -> Name:
        tok = self.peek()
        if tok is None or not tok.is_name:
            self.error("expected name", ("name",))
        parts = [self.advance().lexeme]
        while self.at("colon") and self.peek(1) is not None and self.peek(1).is_name:
            self.advance()
            parts.append(self.advance().lexeme)
        return Name(parts[-1], tuple(parts[:-1]))

    def term(self, what="term"):
        tok = self.peek()
        if tok is None:
            self.error(f"expected {what}", (what,))
        if tok.is_name:
            return self.name()
        if tok.kind == "number":
            self.advance()
            return Number(float(tok.lexeme))
        if tok.kind == "variable":
            if tok.lexeme == "?":
                self.error("anonymous '?' is only allowed as the last analogy term", ("?name",))
            self.advance()
            return Variable(tok.lexeme[1:])
        if tok.kind == "lbrace":
            return self.subgraph()
        self.error(f"expected {what}", (what,))

    def subgraph(self) -> SubGraph:
        self.expect("lbrace", label="'{'")
        statements = []
        while True:
            while self.at("newline"):
                self.advance()
            if self.at("rbrace"):
                break
            if self.peek() is None:
                self.error("expected '}'", ("}",))
            end = self.extent(self.pos)
            saved = self.limit
            self.limit = end
            statements.append(self.statement())
            if self.pos < self.limit:
                self.error("unexpected token in sub-graph", ("}", "newline"))
            self.limit = saved
        if not statements:
            self.error("empty sub-graph", ("statement",))
        self.expect("rbrace", label="'}'")
        return SubGraph(tuple(statements))

    # -- queries -----------------------------------------------------------------

    def query(self) -> Query:
        qtok = self.advance()
        var = self.advance()
        if var.lexeme == "?":
            self.pos -= 1
            self.error("query head must be a named variable", ("?name",))
        self.expect_keyword("where")
        where = self.conditions()
        from_ = []
        if self.at_keyword("from"):
            self.advance()
            from_ = self.conditions()
        if qtok.lexeme in ("few", "many", "most") and not from_:
            raise MissingFromClause(f"{qtok.lexeme!r} needs a 'from' clause",
                                    qtok.line, qtok.column, ("from",))
        return Query(qtok.lexeme, Variable(var.lexeme[1:]), tuple(where), tuple(from_))


def _with_meta(cond, meta: Metadata):
    if isinstance(cond, Property):
        return Property(cond.descriptor, cond.argument, cond.operator, cond.referent,
                        cond.scope, meta)
    return Relation(cond.subject, cond.relationship, cond.object, cond.scope, meta)


def _text_end(text: str) -> tuple[int, int]:
    lines = text.split("\n")
    return len(lines), max(1, len(lines[-1]))


def parse_with_recovery(text: str, allow_queries: bool = True) -> ParseResult:
    """Parse every line; a bad line is reported and skipped, the rest still parse."""
    result = ParseResult()
    tokens = list(_lex(text))
    for group in _split_lines(tokens):
        bad = next((t for t in group if t.kind == "error"), None)
        if bad is not None:
            result.errors.append(ParseError(f"illegal character {bad.lexeme!r}",
                                            bad.line, bad.column))
            continue
        p = _Parser(group, _text_end(text))
        try:
            result.items.append(p.item(allow_query=allow_queries))
        except ParseError as exc:
            result.errors.append(exc)
        except ValueError as exc:
            tok = group[0]
            result.errors.append(ParseError(str(exc), tok.line, tok.column))
    return result


def parse_document(text: str) -> list:
    """Statements (and any queries) in ``text``; raises the first ParseError."""
    result = parse_with_recovery(text)
    if result.errors:
        raise result.errors[0]
    return result.items


def parse_statement(text: str):
    items = parse_document(text)
    if len(items) != 1 or isinstance(items[0], Query):
        raise ParseError("expected exactly one statement", 1, 1)
    return items[0]


def parse_condition(text: str):
    """A single property or relation, variables allowed (used for suppositions)."""
    stmt = parse_statement(text)
    if not isinstance(stmt, (Property, Relation)):
        raise ParseError("expected a property or relation", 1, 1, ("condition",))
    return stmt


def parse_query(text: str) -> Query:
    tokens = list(_lex(text))
    groups = _split_lines(tokens)
    if not groups:
        raise ParseError("expected a query", 1, 1, QUANTIFIERS)
    if len(groups) > 1:
        tok = groups[1][0]
        raise ParseError("a query must be a single line", tok.line, tok.column)
    group = groups[0]
    bad = next((t for t in group if t.kind == "error"), None)
    if bad is not None:
        raise ParseError(f"illegal character {bad.lexeme!r}", bad.line, bad.column)
    first = group[0]
    if not (first.lexeme in QUANTIFIERS and len(group) > 1 and group[1].kind == "variable"):
        raise ParseError("expected a quantifier and a variable", first.line, first.column,
                         QUANTIFIERS)
    return _Parser(group, _text_end(text)).item(allow_query=True)


# ------------------------------------------------------------ serializer


def serialize(node) -> str:
    """Canonical PKN text for a term, statement, query or list of those."""
    if isinstance(node, list):
        return "".join(serialize(x) + "\n" for x in node)
    if isinstance(node, Name):
        return str(node)
    if isinstance(node, Number):
        return format_number(node.value)
    if isinstance(node, Variable):
        return "?" + node.name
    if isinstance(node, SubGraph):
        return "{" + "\n".join(serialize(s) for s in node.statements) + "}"
    if isinstance(node, Property):
        text = (f"{serialize(node.descriptor)} of {serialize(node.argument)} {node.operator} "
                + ", ".join(serialize(r) for r in node.referent))
        return text + _scope(node.scope) + _meta(node.metadata)
    if isinstance(node, Relation):
        text = f"{serialize(node.subject)} {node.relationship} {serialize(node.object)}"
        return text + _scope(node.scope) + _meta(node.metadata)
    if isinstance(node, Implication):
        return (" and ".join(serialize(c) for c in node.antecedents) + " implies "
                + " and ".join(serialize(c) for c in node.consequents) + _meta(node.metadata))
    if isinstance(node, Analogy):
        return "{}:{}::{}:{}".format(*(serialize(t) for t in node.terms))
    if isinstance(node, Query):
        text = (f"{node.quantifier} ?{node.head.name} where "
                + " and ".join(serialize(c) for c in node.where))
        if node.from_:
            text += " from " + " and ".join(serialize(c) for c in node.from_)
        return text
    raise TypeError(f"cannot serialize {type(node).__name__}")


def _scope(scope) -> str:
    return " for " + ", ".join(str(s) for s in scope) if scope else ""


def _meta(meta) -> str:
    if not meta:
        return ""
    return " (" + ", ".join(f"{k} {v.value}" for k, v in meta) + ")"
