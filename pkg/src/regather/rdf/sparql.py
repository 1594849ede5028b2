"""SPARQL subset parser.

Supported: PREFIX, SELECT (with DISTINCT), basic graph patterns, GRAPH,
FILTER (=, !=, <, <=, >, >=, regex, &&, ||, !), OPTIONAL, ORDER BY,
LIMIT/OFFSET. Constructs outside the subset raise UnsupportedFeature by
name; anything else malformed raises ParseError with a position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import ParseError, UnsupportedFeature
from .ntriples import unescape_string
from .terms import (
    IRI,
    Literal,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
)

_UNSUPPORTED = {
    "UNION", "MINUS", "BIND", "VALUES", "SERVICE", "EXISTS", "NOT",
    "CONSTRUCT", "ASK", "DESCRIBE", "FROM", "REDUCED",
    "GROUP", "HAVING", "COUNT", "SUM", "AVG", "MIN", "MAX", "SAMPLE",
    "INSERT", "DELETE", "LOAD", "CLEAR", "WITH",
    "BOUND", "STR", "LANG", "DATATYPE", "IRI", "URI", "ISIRI", "ISURI",
    "ISBLANK", "ISLITERAL", "ISNUMERIC", "CONTAINS", "STRSTARTS", "STRENDS",
    "CONCAT", "REPLACE", "ABS", "COALESCE", "IF", "IN",
}


# --- AST ---

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return "?" + self.name


@dataclass(frozen=True)
class TriplePattern:
    s: object
    p: object
    o: object


@dataclass
class Bgp:
    patterns: list


@dataclass
class GraphGroup:
    graph: object  # Var or IRI
    group: "GroupPattern"


@dataclass
class OptionalGroup:
    group: "GroupPattern"


@dataclass
class GroupPattern:
    elements: list = field(default_factory=list)  # Bgp | GraphGroup | OptionalGroup
    filters: list = field(default_factory=list)


@dataclass(frozen=True)
class Comparison:
    op: str  # = != < <= > >=
    left: object
    right: object


@dataclass(frozen=True)
class RegexCall:
    target: object
    pattern: str
    flags: str = ""


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Not:
    operand: object


@dataclass(frozen=True)
class OrderCondition:
    expr: Var
    descending: bool = False


@dataclass
class SelectQuery:
    variables: list  # list[Var], resolved even for SELECT *
    distinct: bool
    where: GroupPattern
    order_by: list = field(default_factory=list)
    limit: int | None = None
    offset: int = 0
    select_star: bool = False


# --- tokenizer ---

_TOKEN_RX = [
    ("IRIREF", re.compile(r'<[^<>"{}|^`\\\x00-\x20]*>')),
    ("VAR", re.compile(r"[?$][A-Za-z_][A-Za-z0-9_]*")),
    ("STRING", re.compile(r'"(?:[^"\\\n\r]|\\.)*"|\'(?:[^\'\\\n\r]|\\.)*\'')),
    ("LANGTAG", re.compile(r"@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*")),
    ("DOUBLE", re.compile(r"[+-]?(?:\d+\.\d*|\.?\d+)[eE][+-]?\d+")),
    ("DECIMAL", re.compile(r"[+-]?\d*\.\d+")),
    ("INTEGER", re.compile(r"[+-]?\d+")),
    ("BLANK", re.compile(r"_:[A-Za-z0-9][A-Za-z0-9_.\-]*")),
    ("HATHAT", re.compile(r"\^\^")),
    ("OP", re.compile(r"&&|\|\||!=|<=|>=|[=<>!]")),
    ("PUNCT", re.compile(r"[{}().;,*/|+^\[\]]")),
    ("PNAME_OR_KW", re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*(?::[A-Za-z0-9_\-.%]*)?|:[A-Za-z0-9_\-.%]*")),
]

_KEYWORDS = {
    "SELECT", "WHERE", "PREFIX", "BASE", "DISTINCT", "FILTER", "OPTIONAL",
    "GRAPH", "ORDER", "BY", "ASC", "DESC", "LIMIT", "OFFSET", "REGEX", "A",
    "TRUE", "FALSE",
}


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    pos: int
    line: int
    col: int


def _tokenize(text):
    tokens = []
    pos, line, col = 0, 1, 1
    length = len(text)
    while pos < length:
        ch = text[pos]
        if ch in " \t\r\n":
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
            pos += 1
            continue
        if ch == "#":
            end = text.find("\n", pos)
            pos = end if end != -1 else length
            continue
        # '<' is an IRI only when it closes before whitespace; otherwise operator
        for kind, rx in _TOKEN_RX:
            m = rx.match(text, pos)
            if m:
                value = m.group(0)
                if kind == "PNAME_OR_KW" and value.upper() in _KEYWORDS and ":" not in value:
                    kind = "KW"
                    value = value.upper()
                tokens.append(_Token(kind, value, pos, line, col))
                col += len(m.group(0))
                pos = m.end()
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", position=pos, line=line, column=col)
    tokens.append(_Token("EOF", "", pos, line, col))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.index = 0
        self.prefixes = {}

    # -- token helpers --

    def peek(self):
        return self.tokens[self.index]

    def next(self):
        tok = self.tokens[self.index]
        if tok.kind != "EOF":
            self.index += 1
        return tok

    def error(self, message, token=None):
        token = token or self.peek()
        raise ParseError(message, position=token.pos, line=token.line, column=token.col)

    def expect_kw(self, keyword):
        tok = self.next()
        if tok.kind != "KW" or tok.value != keyword:
            self.error(f"expected {keyword}, got {tok.value!r}", tok)
        return tok

    def expect_punct(self, value):
        tok = self.next()
        if tok.value != value:
            self.error(f"expected {value!r}, got {tok.value!r}", tok)
        return tok

    def _check_unsupported(self, tok):
        if tok.kind == "PNAME_OR_KW" and ":" not in tok.value and tok.value.upper() in _UNSUPPORTED:
            raise UnsupportedFeature(
                f"{tok.value.upper()} is outside the supported query subset"
            )

    # -- grammar --

    def parse(self):
        while True:
            tok = self.peek()
            if tok.kind == "KW" and tok.value == "PREFIX":
                self.next()
                name_tok = self.next()
                if name_tok.kind != "PNAME_OR_KW" or not name_tok.value.endswith(":"):
                    self.error("expected prefix declaration name", name_tok)
                iri_tok = self.next()
                if iri_tok.kind != "IRIREF":
                    self.error("expected IRI in PREFIX declaration", iri_tok)
                self.prefixes[name_tok.value[:-1]] = iri_tok.value[1:-1]
                continue
            if tok.kind == "KW" and tok.value == "BASE":
                raise UnsupportedFeature("BASE is outside the supported query subset")
            break

        tok = self.peek()
        self._check_unsupported(tok)
        if not (tok.kind == "KW" and tok.value == "SELECT"):
            self.error(f"expected SELECT, got {tok.value!r}")
        self.next()

        distinct = False
        tok = self.peek()
        if tok.kind == "KW" and tok.value == "DISTINCT":
            distinct = True
            self.next()
        elif tok.kind == "PNAME_OR_KW" and tok.value.upper() == "REDUCED":
            raise UnsupportedFeature("REDUCED is outside the supported query subset")

        select_star = False
        variables = []
        tok = self.peek()
        if tok.value == "*":
            select_star = True
            self.next()
        else:
            while self.peek().kind == "VAR":
                variables.append(Var(self.next().value[1:]))
            if not variables:
                self._check_unsupported(self.peek())
                if self.peek().value == "(":
                    raise UnsupportedFeature(
                        "expressions and aggregates in SELECT are outside the supported query subset"
                    )
                self.error("expected projection variables or *")

        tok = self.peek()
        if tok.kind == "KW" and tok.value == "WHERE":
            self.next()
        where = self.group_pattern()

        order_by = []
        limit = None
        offset = 0
        while True:
            tok = self.peek()
            if tok.kind == "KW" and tok.value == "ORDER":
                self.next()
                self.expect_kw("BY")
                while True:
                    t = self.peek()
                    if t.kind == "VAR":
                        order_by.append(OrderCondition(Var(self.next().value[1:])))
                    elif t.kind == "KW" and t.value in ("ASC", "DESC"):
                        self.next()
                        self.expect_punct("(")
                        v = self.next()
                        if v.kind != "VAR":
                            self.error("expected variable in order condition", v)
                        self.expect_punct(")")
                        order_by.append(OrderCondition(Var(v.value[1:]), descending=t.value == "DESC"))
                    else:
                        break
                if not order_by:
                    self.error("expected order condition after ORDER BY")
                continue
            if tok.kind == "KW" and tok.value == "LIMIT":
                self.next()
                limit = self._integer()
                continue
            if tok.kind == "KW" and tok.value == "OFFSET":
                self.next()
                offset = self._integer()
                continue
            break

        tok = self.peek()
        if tok.kind != "EOF":
            self._check_unsupported(tok)
            self.error(f"unexpected trailing content {tok.value!r}")

        if select_star:
            variables = [Var(name) for name in _scope_vars(where)]
        return SelectQuery(
            variables=variables,
            distinct=distinct,
            where=where,
            order_by=order_by,
            limit=limit,
            offset=offset,
            select_star=select_star,
        )

    def _integer(self):
        tok = self.next()
        if tok.kind != "INTEGER" or int(tok.value) < 0:
            self.error("expected a non-negative integer", tok)
        return int(tok.value)

    def group_pattern(self):
        self.expect_punct("{")
        group = GroupPattern()
        current_bgp = None
        while True:
            tok = self.peek()
            if tok.value == "}":
                self.next()
                return group
            if tok.kind == "EOF":
                self.error("unterminated group pattern: expected '}'")
            if tok.kind == "KW" and tok.value == "FILTER":
                self.next()
                group.filters.append(self.constraint())
                current_bgp = None
                self._optional_dot()
                continue
            if tok.kind == "KW" and tok.value == "OPTIONAL":
                self.next()
                group.elements.append(OptionalGroup(self.group_pattern()))
                current_bgp = None
                self._optional_dot()
                continue
            if tok.kind == "KW" and tok.value == "GRAPH":
                self.next()
                name_tok = self.peek()
                if name_tok.kind == "VAR":
                    graph_term = Var(self.next().value[1:])
                elif name_tok.kind in ("IRIREF", "PNAME_OR_KW"):
                    graph_term = self.iri_term()
                else:
                    self.error("expected graph name (IRI or variable)", name_tok)
                group.elements.append(GraphGroup(graph_term, self.group_pattern()))
                current_bgp = None
                self._optional_dot()
                continue
            if tok.value == "{":
                raise UnsupportedFeature("nested group patterns are outside the supported query subset")
            self._check_unsupported(tok)
            # triples block
            pattern = self.triple_pattern()
            if current_bgp is None:
                current_bgp = Bgp([])
                group.elements.append(current_bgp)
            current_bgp.patterns.append(pattern)
            tok = self.peek()
            if tok.value == ".":
                self.next()
            elif tok.value in (";", ","):
                raise UnsupportedFeature(
                    "predicate/object lists are outside the supported query subset; repeat the subject"
                )

    def _optional_dot(self):
        if self.peek().value == ".":
            self.next()

    def triple_pattern(self):
        s = self.term(position="subject")
        p = self.term(position="predicate")
        o = self.term(position="object")
        return TriplePattern(s, p, o)

    def iri_term(self):
        tok = self.next()
        if tok.kind == "IRIREF":
            return IRI(tok.value[1:-1])
        if tok.kind == "PNAME_OR_KW" and ":" in tok.value:
            prefix, _, local = tok.value.partition(":")
            if prefix not in self.prefixes:
                self.error(f"undeclared prefix {prefix!r}", tok)
            return IRI(self.prefixes[prefix] + local)
        self.error(f"expected IRI, got {tok.value!r}", tok)

    def term(self, position):
        tok = self.peek()
        if tok.kind == "VAR":
            self.next()
            return Var(tok.value[1:])
        if tok.kind == "IRIREF" or (tok.kind == "PNAME_OR_KW" and ":" in tok.value):
            term = self.iri_term()
            nxt = self.peek()
            if position == "predicate" and nxt.value in ("/", "|", "*", "+", "^"):
                raise UnsupportedFeature("property paths are outside the supported query subset")
            return term
        if tok.kind == "KW" and tok.value == "A":
            if position != "predicate":
                self.error("'a' is only valid in predicate position", tok)
            self.next()
            return IRI(RDF_TYPE)
        if position == "predicate":
            self._check_unsupported(tok)
            self.error(f"expected predicate, got {tok.value!r}", tok)
        if tok.kind == "BLANK" or tok.value in ("[", "("):
            raise UnsupportedFeature("blank nodes in query patterns are outside the supported query subset")
        if position == "subject":
            self._check_unsupported(tok)
            self.error(f"expected subject, got {tok.value!r}", tok)
        return self.literal_or_error()

    def literal_or_error(self):
        tok = self.next()
        if tok.kind == "STRING":
            lexical = unescape_string(tok.value[1:-1])
            nxt = self.peek()
            if nxt.kind == "LANGTAG":
                self.next()
                return Literal(lexical, language=nxt.value[1:].lower())
            if nxt.kind == "HATHAT":
                self.next()
                return Literal(lexical, datatype=self.iri_term().value)
            return Literal(lexical)
        if tok.kind == "INTEGER":
            return Literal(tok.value, datatype=XSD_INTEGER)
        if tok.kind == "DECIMAL":
            return Literal(tok.value, datatype=XSD_DECIMAL)
        if tok.kind == "DOUBLE":
            return Literal(tok.value, datatype=XSD_DOUBLE)
        if tok.kind == "KW" and tok.value in ("TRUE", "FALSE"):
            return Literal(tok.value.lower(), datatype=XSD_BOOLEAN)
        self._check_unsupported(tok)
        self.error(f"expected term, got {tok.value!r}", tok)

    # -- filter expressions --

    def constraint(self):
        tok = self.peek()
        if tok.kind == "KW" and tok.value == "REGEX":
            return self.regex_call()
        if tok.value == "(":
            return self.bracketted_expression()
        self._check_unsupported(tok)
        self.error("expected a bracketted expression or regex(...) after FILTER")

    def bracketted_expression(self):
        self.expect_punct("(")
        expr = self.or_expression()
        self.expect_punct(")")
        return expr

    def or_expression(self):
        left = self.and_expression()
        while self.peek().value == "||":
            self.next()
            left = Or(left, self.and_expression())
        return left

    def and_expression(self):
        left = self.unary_expression()
        while self.peek().value == "&&":
            self.next()
            left = And(left, self.unary_expression())
        return left

    def unary_expression(self):
        tok = self.peek()
        if tok.value == "!":
            self.next()
            return Not(self.unary_expression())
        if tok.value == "(":
            return self.bracketted_expression()
        if tok.kind == "KW" and tok.value == "REGEX":
            return self.regex_call()
        return self.relational_expression()

    def relational_expression(self):
        left = self.operand()
        tok = self.peek()
        if tok.value in ("=", "!=", "<", "<=", ">", ">="):
            self.next()
            return Comparison(tok.value, left, self.operand())
        self.error(f"expected comparison operator, got {tok.value!r}", tok)

    def operand(self):
        tok = self.peek()
        if tok.kind == "VAR":
            self.next()
            return Var(tok.value[1:])
        if tok.kind == "IRIREF" or (tok.kind == "PNAME_OR_KW" and ":" in tok.value):
            return self.iri_term()
        self._check_unsupported(tok)
        return self.literal_or_error()

    def regex_call(self):
        self.expect_kw("REGEX")
        self.expect_punct("(")
        target_tok = self.peek()
        if target_tok.kind != "VAR":
            self._check_unsupported(target_tok)
            self.error("regex target must be a variable", target_tok)
        target = Var(self.next().value[1:])
        self.expect_punct(",")
        pat_tok = self.next()
        if pat_tok.kind != "STRING":
            self.error("regex pattern must be a string literal", pat_tok)
        pattern = unescape_string(pat_tok.value[1:-1])
        flags = ""
        if self.peek().value == ",":
            self.next()
            flags_tok = self.next()
            if flags_tok.kind != "STRING":
                self.error("regex flags must be a string literal", flags_tok)
            flags = unescape_string(flags_tok.value[1:-1])
        self.expect_punct(")")
        return RegexCall(target, pattern, flags)


def _scope_vars(group):
    """In-scope variable names in order of first syntactic appearance."""
    seen = []

    def visit_group(g):
        for element in g.elements:
            if isinstance(element, Bgp):
                for pattern in element.patterns:
                    for term in (pattern.s, pattern.p, pattern.o):
                        if isinstance(term, Var) and term.name not in seen:
                            seen.append(term.name)
            elif isinstance(element, GraphGroup):
                if isinstance(element.graph, Var) and element.graph.name not in seen:
                    seen.append(element.graph.name)
                visit_group(element.group)
            elif isinstance(element, OptionalGroup):
                visit_group(element.group)

    visit_group(group)
    return seen


def parse_query(text):
    """Parse SPARQL subset text into a SelectQuery AST."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"query is not UTF-8: {exc}") from exc
    return _Parser(text).parse()
