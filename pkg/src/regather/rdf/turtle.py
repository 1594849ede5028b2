"""Turtle reader/writer.

The writer emits a conservative subset (prefixed names where clean, quoted
typed literals, one subject block per subject). The reader covers the
constructs that show up in real vocabulary and metadata files: prefixes,
predicate/object lists, blank node property lists, collections, numeric
and boolean shorthand, and long strings.
"""

from __future__ import annotations

import re
from urllib.parse import urljoin

from ..errors import ParseError
from .ntriples import unescape_string
from .terms import (
    BlankNode,
    IRI,
    Literal,
    RDF_FIRST,
    RDF_NIL,
    RDF_NS,
    RDF_REST,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    escape_literal,
)

DEFAULT_PREFIXES = {
    "rdf": RDF_NS,
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "owl": "http://www.w3.org/2002/07/owl#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
}

_PN_LOCAL = re.compile(r"[A-Za-z0-9_\-.À-￿]*$")


# --- tokenizer ---

_TOKEN_SPECS = [
    ("COMMENT", re.compile(r"#[^\n]*")),
    ("IRIREF", re.compile(r'<[^<>"{}|^`\\\x00-\x20]*>')),
    ("LONG_STRING", re.compile(r'"""(?:[^"\\]|\\.|"(?!""))*"""|\'\'\'(?:[^\'\\]|\\.|\'(?!\'\'))*\'\'\'', re.S)),
    ("STRING", re.compile(r'"(?:[^"\\\n\r]|\\.)*"|\'(?:[^\'\\\n\r]|\\.)*\'')),
    ("NAME", re.compile(r"@(?:prefix|base)\b")),  # directives outrank language tags
    ("LANGTAG", re.compile(r"@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*")),
    ("DOUBLE", re.compile(r"[+-]?(?:\d+\.\d*|\.?\d+)[eE][+-]?\d+")),
    ("DECIMAL", re.compile(r"[+-]?\d*\.\d+")),
    ("INTEGER", re.compile(r"[+-]?\d+")),
    ("BLANK", re.compile(r"_:[A-Za-z0-9][A-Za-z0-9_.\-]*")),
    ("HATHAT", re.compile(r"\^\^")),
    ("PUNCT", re.compile(r"[;,.\[\]()]")),
    # prefixed name / directive / keyword; ':' alone is a valid empty pname
    ("NAME", re.compile(r"@?[A-Za-z_À-￿][A-Za-z0-9_\-.À-￿]*|:")),
]
_PNAME = re.compile(r"(?:[A-Za-z_À-￿][A-Za-z0-9_\-.À-￿]*)?:[A-Za-z0-9_\-.%À-￿]*")


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message):
        raise ParseError(message, position=self.pos, line=self.line, column=self.col)

    def _advance(self, length):
        chunk = self.text[self.pos:self.pos + length]
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.col = length - chunk.rfind("\n")
        else:
            self.col += length
        self.pos += length

    def _skip_ws(self):
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self._advance(1)
            elif ch == "#":
                end = self.text.find("\n", self.pos)
                self._advance((end if end != -1 else len(self.text)) - self.pos)
            else:
                break

    def peek(self):
        self._skip_ws()
        if self.pos >= len(self.text):
            return None, None
        # pnames overlap NAME; try them first when a ':' is involved
        m = _PNAME.match(self.text, self.pos)
        if m and self.text[self.pos] != "_":
            return "PNAME", m.group(0)
        for kind, rx in _TOKEN_SPECS:
            m = rx.match(self.text, self.pos)
            if m:
                return kind, m.group(0)
        self.error(f"unexpected character {self.text[self.pos]!r}")

    def next(self):
        kind, value = self.peek()
        if kind is None:
            self.error("unexpected end of document")
        self._advance(len(value))
        return kind, value

    def at_end(self):
        self._skip_ws()
        return self.pos >= len(self.text)


class _TurtleParser:
    def __init__(self, text):
        self.tokens = _Tokens(text)
        self.prefixes = {}
        self.base = None
        self.triples = []
        self._anon = 0

    def _fresh_blank(self):
        self._anon += 1
        return BlankNode(f"genid{self._anon}")

    def _resolve(self, iri):
        if self.base and "://" not in iri and not iri.startswith("urn:"):
            return urljoin(self.base, iri)
        return iri

    def _expand_pname(self, pname):
        prefix, _, local = pname.partition(":")
        if prefix not in self.prefixes:
            self.tokens.error(f"undeclared prefix {prefix!r}")
        return IRI(self.prefixes[prefix] + local.replace("%20", " "))

    def parse(self):
        while not self.tokens.at_end():
            kind, value = self.tokens.peek()
            if kind == "NAME" and value.lower() in ("@prefix", "prefix"):
                self._directive_prefix(value.lower() == "@prefix")
            elif kind == "NAME" and value.lower() in ("@base", "base"):
                self._directive_base(value.lower() == "@base")
            else:
                self._statement()
        return self.triples

    def _directive_prefix(self, dotted):
        self.tokens.next()
        kind, value = self.tokens.next()
        if kind != "PNAME" or not value.endswith(":"):
            self.tokens.error("expected prefix name in @prefix directive")
        prefix = value[:-1]
        kind, iri = self.tokens.next()
        if kind != "IRIREF":
            self.tokens.error("expected IRI in @prefix directive")
        self.prefixes[prefix] = self._resolve(iri[1:-1])
        if dotted:
            self._expect_dot()

    def _directive_base(self, dotted):
        self.tokens.next()
        kind, iri = self.tokens.next()
        if kind != "IRIREF":
            self.tokens.error("expected IRI in @base directive")
        self.base = iri[1:-1]
        if dotted:
            self._expect_dot()

    def _expect_dot(self):
        kind, value = self.tokens.next()
        if value != ".":
            self.tokens.error(f"expected '.', got {value!r}")

    def _statement(self):
        subject = self._subject()
        self._predicate_object_list(subject)
        self._expect_dot()

    def _subject(self):
        kind, value = self.tokens.peek()
        if kind == "IRIREF":
            self.tokens.next()
            return IRI(self._resolve(unescape_string(value[1:-1])))
        if kind == "PNAME":
            self.tokens.next()
            return self._expand_pname(value)
        if kind == "BLANK":
            self.tokens.next()
            return BlankNode(value[2:])
        if value == "[":
            return self._blank_property_list()
        if value == "(":
            return self._collection()
        self.tokens.error(f"expected subject, got {value!r}")

    def _predicate(self):
        kind, value = self.tokens.peek()
        if kind == "NAME" and value == "a":
            self.tokens.next()
            return IRI(RDF_TYPE)
        if kind == "IRIREF":
            self.tokens.next()
            return IRI(self._resolve(unescape_string(value[1:-1])))
        if kind == "PNAME":
            self.tokens.next()
            return self._expand_pname(value)
        self.tokens.error(f"expected predicate, got {value!r}")

    def _predicate_object_list(self, subject):
        while True:
            predicate = self._predicate()
            while True:
                obj = self._object()
                self.triples.append((subject, predicate, obj))
                _, value = self.tokens.peek()
                if value == ",":
                    self.tokens.next()
                    continue
                break
            _, value = self.tokens.peek()
            if value != ";":
                return
            while value == ";":  # trailing ';' permitted before '.' or ']'
                self.tokens.next()
                _, value = self.tokens.peek()
            if value in (".", "]") or value is None:
                return

    def _object(self):
        kind, value = self.tokens.peek()
        if kind == "IRIREF":
            self.tokens.next()
            return IRI(self._resolve(unescape_string(value[1:-1])))
        if kind == "PNAME":
            self.tokens.next()
            return self._expand_pname(value)
        if kind == "BLANK":
            self.tokens.next()
            return BlankNode(value[2:])
        if kind in ("STRING", "LONG_STRING"):
            return self._literal()
        if kind == "INTEGER":
            self.tokens.next()
            return Literal(value, datatype=XSD_INTEGER)
        if kind == "DECIMAL":
            self.tokens.next()
            return Literal(value, datatype=XSD_DECIMAL)
        if kind == "DOUBLE":
            self.tokens.next()
            return Literal(value, datatype=XSD_DOUBLE)
        if kind == "NAME" and value in ("true", "false"):
            self.tokens.next()
            return Literal(value, datatype=XSD_BOOLEAN)
        if value == "[":
            return self._blank_property_list()
        if value == "(":
            return self._collection()
        self.tokens.error(f"expected object, got {value!r}")

    def _literal(self):
        kind, value = self.tokens.next()
        if kind == "LONG_STRING":
            body = value[3:-3]
        else:
            body = value[1:-1]
        lexical = unescape_string(body)
        kind, value = self.tokens.peek()
        if kind == "LANGTAG":
            self.tokens.next()
            return Literal(lexical, language=value[1:].lower())
        if kind == "HATHAT":
            self.tokens.next()
            kind, value = self.tokens.next()
            if kind == "IRIREF":
                return Literal(lexical, datatype=self._resolve(unescape_string(value[1:-1])))
            if kind == "PNAME":
                return Literal(lexical, datatype=self._expand_pname(value).value)
            self.tokens.error("expected datatype IRI after '^^'")
        return Literal(lexical)

    def _blank_property_list(self):
        self.tokens.next()  # '['
        node = self._fresh_blank()
        kind, value = self.tokens.peek()
        if value != "]":
            self._predicate_object_list(node)
        kind, value = self.tokens.next()
        if value != "]":
            self.tokens.error(f"expected ']', got {value!r}")
        return node

    def _collection(self):
        self.tokens.next()  # '('
        items = []
        while True:
            kind, value = self.tokens.peek()
            if value == ")":
                self.tokens.next()
                break
            items.append(self._object())
        if not items:
            return IRI(RDF_NIL)
        head = self._fresh_blank()
        node = head
        for index, item in enumerate(items):
            self.triples.append((node, IRI(RDF_FIRST), item))
            if index == len(items) - 1:
                self.triples.append((node, IRI(RDF_REST), IRI(RDF_NIL)))
            else:
                nxt = self._fresh_blank()
                self.triples.append((node, IRI(RDF_REST), nxt))
                node = nxt
        return head


def parse_turtle(data):
    """Parse a Turtle document into a list of (s, p, o) triples."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"document is not UTF-8: {exc}") from exc
    return _TurtleParser(data).parse()


# --- writer ---

def _pname_or_iri(iri, prefixes):
    for prefix, ns in prefixes.items():
        if iri.startswith(ns):
            local = iri[len(ns):]
            if local and _PN_LOCAL.match(local) and not local.startswith((".", "-")) and not local.endswith("."):
                return f"{prefix}:{local}"
    return f"<{iri}>"


def _render(term, prefixes):
    if isinstance(term, IRI):
        return _pname_or_iri(term.value, prefixes)
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    body = f'"{escape_literal(term.lexical)}"'
    if term.language:
        return body + "@" + term.language
    if term.datatype:
        return body + "^^" + _pname_or_iri(term.datatype, prefixes)
    return body


def dump_turtle(triples, prefixes=None):
    """Serialize triples grouped by subject, with prefix declarations."""
    prefixes = dict(DEFAULT_PREFIXES if prefixes is None else prefixes)
    triples = list(triples)
    used = set()
    for s, p, o in triples:
        for term in (s, p, o):
            if isinstance(term, IRI):
                used.add(term.value)
            elif isinstance(term, Literal) and term.datatype:
                used.add(term.datatype)
    header = [
        f"@prefix {prefix}: <{ns}> ."
        for prefix, ns in sorted(prefixes.items())
        if any(value.startswith(ns) for value in used)
    ]

    by_subject = {}
    for s, p, o in triples:
        by_subject.setdefault(s, []).append((p, o))
    blocks = []
    for subject in sorted(by_subject, key=lambda t: (isinstance(t, BlankNode), str(t))):
        pairs = sorted(by_subject[subject], key=lambda po: (po[0].value, str(po[1])))
        lines = []
        by_pred = {}
        ordered_preds = []
        for p, o in pairs:
            if p not in by_pred:
                by_pred[p] = []
                ordered_preds.append(p)
            by_pred[p].append(o)
        subject_str = _render(subject, prefixes)
        for index, p in enumerate(ordered_preds):
            pred_str = "a" if p.value == RDF_TYPE else _render(p, prefixes)
            objects = ", ".join(_render(o, prefixes) for o in by_pred[p])
            lead = subject_str if index == 0 else " " * 4
            tail = " ;" if index < len(ordered_preds) - 1 else " ."
            lines.append(f"{lead} {pred_str} {objects}{tail}")
        blocks.append("\n".join(lines))

    parts = []
    if header:
        parts.append("\n".join(header))
    parts.extend(blocks)
    if not parts:
        return ""
    return "\n\n".join(parts) + "\n"
