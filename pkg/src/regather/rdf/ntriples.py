"""N-Triples reader/writer.

Triples only; the enclosing named graph is supplied by the caller. Blank
node labels in a document become the internal blank node ids verbatim, so
dump followed by load reproduces the exact quad set.
"""

from __future__ import annotations

import re

from ..errors import ParseError
from .terms import BlankNode, IRI, Literal, nt_term

_IRIREF = re.compile(r'<([^<>"{}|^`\\\x00-\x20]*)>')
_BLANK = re.compile(r"_:([A-Za-z0-9][A-Za-z0-9_.\-]*)")
_STRING = re.compile(r'"((?:[^"\\\n\r]|\\.)*)"')
_LANGTAG = re.compile(r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)")

_UNESCAPE = re.compile(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|[tbnrf\"'\\])")
_UNESCAPE_MAP = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def unescape_string(raw, line=None):
    def sub(match):
        code = match.group(1)
        if code[0] in "uU":
            return chr(int(code[1:], 16))
        return _UNESCAPE_MAP[code[0]]

    try:
        return _UNESCAPE.sub(sub, raw)
    except (ValueError, KeyError) as exc:
        raise ParseError(f"bad string escape: {exc}", line=line, column=1) from exc


def _parse_term(text, pos, line_no, subject_position=False):
    """Parse one term starting at pos; returns (term, new_pos)."""
    if pos >= len(text):
        raise ParseError("unexpected end of statement", line=line_no, column=pos + 1)
    ch = text[pos]
    if ch == "<":
        m = _IRIREF.match(text, pos)
        if not m:
            raise ParseError("malformed IRI", line=line_no, column=pos + 1)
        return IRI(unescape_string(m.group(1), line_no)), m.end()
    if ch == "_":
        m = _BLANK.match(text, pos)
        if not m:
            raise ParseError("malformed blank node label", line=line_no, column=pos + 1)
        return BlankNode(m.group(1)), m.end()
    if ch == '"':
        if subject_position:
            raise ParseError("literal in subject position", line=line_no, column=pos + 1)
        m = _STRING.match(text, pos)
        if not m:
            raise ParseError("malformed literal", line=line_no, column=pos + 1)
        lexical = unescape_string(m.group(1), line_no)
        pos = m.end()
        if text.startswith("^^", pos):
            dt = _IRIREF.match(text, pos + 2)
            if not dt:
                raise ParseError("malformed datatype IRI", line=line_no, column=pos + 1)
            return Literal(lexical, datatype=dt.group(1)), dt.end()
        m = _LANGTAG.match(text, pos)
        if m:
            return Literal(lexical, language=m.group(1).lower()), m.end()
        return Literal(lexical), pos
    raise ParseError(f"unexpected character {ch!r}", line=line_no, column=pos + 1)


def _skip_ws(text, pos):
    while pos < len(text) and text[pos] in " \t":
        pos += 1
    return pos


def parse_ntriples(data):
    """Parse an N-Triples document into a list of (s, p, o) triples."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"document is not UTF-8: {exc}") from exc
    triples = []
    for line_no, raw in enumerate(data.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        pos = 0
        s, pos = _parse_term(line, pos, line_no, subject_position=True)
        pos = _skip_ws(line, pos)
        p, pos = _parse_term(line, pos, line_no)
        if not isinstance(p, IRI):
            raise ParseError("predicate must be an IRI", line=line_no, column=pos)
        pos = _skip_ws(line, pos)
        o, pos = _parse_term(line, pos, line_no)
        pos = _skip_ws(line, pos)
        if pos >= len(line) or line[pos] != ".":
            raise ParseError("statement must end with '.'", line=line_no, column=pos + 1)
        trailing = line[pos + 1:].strip()
        if trailing and not trailing.startswith("#"):
            raise ParseError("trailing content after '.'", line=line_no, column=pos + 2)
        triples.append((s, p, o))
    return triples


def dump_ntriples(triples):
    """Serialize (s, p, o) triples; sorted for byte-stable output."""
    lines = sorted(f"{nt_term(s)} {nt_term(p)} {nt_term(o)} ." for s, p, o in triples)
    if not lines:
        return ""
    return "\n".join(lines) + "\n"
