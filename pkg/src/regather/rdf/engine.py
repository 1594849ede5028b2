"""SPARQL subset evaluator over immutable dataset snapshots.

Semantics notes (shared with the acceptance oracle, implemented separately
there):

- a pattern outside GRAPH matches the union of all named graphs;
- FILTERs apply to the whole group they appear in; FILTERs at the top
  level of an OPTIONAL group become the left-join condition;
- expression errors (unbound variable, non-numeric comparison) drop the
  solution;
- ORDER BY is made total by tie-breaking on the full projected row, so
  result order is deterministic given store contents and query.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .sparql import (
    And,
    Bgp,
    Comparison,
    GraphGroup,
    Not,
    OptionalGroup,
    Or,
    RegexCall,
    Var,
)
from .terms import BlankNode, IRI, Literal


@dataclass
class QuerySolution:
    variables: tuple
    rows: list  # tuples aligned with variables; None marks unbound

    def as_dicts(self):
        return [
            {name: value for name, value in zip(self.variables, row) if value is not None}
            for row in self.rows
        ]


class GraphIndex:
    """Immutable quad list with single-position lookup indexes."""

    __slots__ = ("quads", "by_s", "by_p", "by_o")

    def __init__(self, quads):
        self.quads = tuple(quads)
        self.by_s = {}
        self.by_p = {}
        self.by_o = {}
        for quad in self.quads:
            self.by_s.setdefault(quad.subject, []).append(quad)
            self.by_p.setdefault(quad.predicate, []).append(quad)
            self.by_o.setdefault(quad.object, []).append(quad)

    def candidates(self, s, p, o):
        """Quads to try for a pattern whose bound positions are given (or None)."""
        best = self.quads
        if s is not None:
            found = self.by_s.get(s, ())
            if len(found) < len(best):
                best = found
        if p is not None:
            found = self.by_p.get(p, ())
            if len(found) < len(best):
                best = found
        if o is not None:
            found = self.by_o.get(o, ())
            if len(found) < len(best):
                best = found
        return best


class DatasetView:
    """Named graphs plus their union, indexed for matching."""

    def __init__(self, graphs):
        self.graphs = {name: GraphIndex(quads) for name, quads in graphs.items()}
        union = []
        for name in graphs:
            union.extend(graphs[name])
        self.union = GraphIndex(union)

    def graph_names(self):
        return sorted(self.graphs)

    def view(self, name):
        index = self.graphs.get(name)
        return index if index is not None else GraphIndex(())


_EMPTY = GraphIndex(())


def _resolve(term, solution):
    if isinstance(term, Var):
        return solution.get(term.name)
    return term


def _match_pattern(pattern, view, solutions):
    out = []
    for solution in solutions:
        s = _resolve(pattern.s, solution)
        p = _resolve(pattern.p, solution)
        o = _resolve(pattern.o, solution)
        for quad in view.candidates(s, p, o):
            if s is not None and quad.subject != s:
                continue
            if p is not None and quad.predicate != p:
                continue
            if o is not None and quad.object != o:
                continue
            extended = dict(solution)
            if s is None:
                extended[pattern.s.name] = quad.subject
            if p is None:
                if quad.predicate != extended.get(pattern.p.name, quad.predicate):
                    continue
                extended[pattern.p.name] = quad.predicate
            if o is None:
                if quad.object != extended.get(pattern.o.name, quad.object):
                    continue
                extended[pattern.o.name] = quad.object
            out.append(extended)
    return out


def _match_bgp(bgp, view, solutions):
    for pattern in bgp.patterns:
        solutions = _match_pattern(pattern, view, solutions)
        if not solutions:
            return []
    return solutions


def _eval_elements(elements, dataset, active, solutions):
    view = dataset.union if active is None else dataset.view(active)
    for element in elements:
        if isinstance(element, Bgp):
            solutions = _match_bgp(element, view, solutions)
        elif isinstance(element, GraphGroup):
            solutions = _eval_graph(element, dataset, solutions)
        elif isinstance(element, OptionalGroup):
            solutions = _left_join(element.group, dataset, active, solutions)
        if not solutions:
            return []
    return solutions


def _eval_graph(element, dataset, solutions):
    if isinstance(element.graph, IRI):
        return _eval_group(element.group, dataset, element.graph.value, solutions)
    out = []
    var = element.graph.name
    for name in dataset.graph_names():
        term = IRI(name)
        for solution in solutions:
            bound = solution.get(var)
            if bound is not None and bound != term:
                continue
            seeded = dict(solution)
            seeded[var] = term
            out.extend(_eval_group(element.group, dataset, name, [seeded]))
    return out


def _left_join(inner, dataset, active, solutions):
    out = []
    for solution in solutions:
        extensions = _eval_elements(inner.elements, dataset, active, [solution])
        matched = [
            ext for ext in extensions
            if all(_eval_expr(f, ext) is True for f in inner.filters)
        ]
        if matched:
            out.extend(matched)
        else:
            out.append(solution)
    return out


def _eval_group(group, dataset, active, solutions):
    solutions = _eval_elements(group.elements, dataset, active, solutions)
    if group.filters:
        solutions = [
            solution for solution in solutions
            if all(_eval_expr(f, solution) is True for f in group.filters)
        ]
    return solutions


# --- filter expressions: True / False / None (error) ---

def _term_equal(left, right):
    if isinstance(left, Literal) and isinstance(right, Literal):
        if left.is_numeric() and right.is_numeric():
            try:
                return left.numeric_value() == right.numeric_value()
            except ValueError:
                return None
        return left == right
    if type(left) is type(right):
        return left == right
    return False


def _eval_expr(expr, solution):
    if isinstance(expr, Comparison):
        left = _resolve(expr.left, solution)
        right = _resolve(expr.right, solution)
        if left is None or right is None:
            return None
        if expr.op == "=":
            eq = _term_equal(left, right)
            return eq
        if expr.op == "!=":
            eq = _term_equal(left, right)
            return None if eq is None else not eq
        if isinstance(left, Literal) and isinstance(right, Literal):
            if left.is_numeric() and right.is_numeric():
                try:
                    a, b = left.numeric_value(), right.numeric_value()
                except ValueError:
                    return None
            elif left.is_stringish() and right.is_stringish():
                a, b = left.lexical, right.lexical
            else:
                return None
            if expr.op == "<":
                return a < b
            if expr.op == "<=":
                return a <= b
            if expr.op == ">":
                return a > b
            return a >= b
        return None
    if isinstance(expr, RegexCall):
        value = solution.get(expr.target.name)
        if not isinstance(value, Literal) or not (value.is_stringish() or value.language):
            return None
        flags = 0
        for ch in expr.flags:
            if ch == "i":
                flags |= re.IGNORECASE
            elif ch == "s":
                flags |= re.DOTALL
            elif ch == "m":
                flags |= re.MULTILINE
            else:
                return None
        try:
            return re.search(expr.pattern, value.lexical, flags) is not None
        except re.error:
            return None
    if isinstance(expr, And):
        left = _eval_expr(expr.left, solution)
        right = _eval_expr(expr.right, solution)
        if left is False or right is False:
            return False
        if left is None or right is None:
            return None
        return True
    if isinstance(expr, Or):
        left = _eval_expr(expr.left, solution)
        right = _eval_expr(expr.right, solution)
        if left is True or right is True:
            return True
        if left is None or right is None:
            return None
        return False
    if isinstance(expr, Not):
        value = _eval_expr(expr.operand, solution)
        return None if value is None else not value
    raise TypeError(f"unknown expression node {expr!r}")


# --- ordering ---

def term_key(term):
    """Total order over optional terms: unbound < blank < IRI < literal."""
    if term is None:
        return (0, "", 0.0, "", "", "")
    if isinstance(term, BlankNode):
        return (1, term.label, 0.0, "", "", "")
    if isinstance(term, IRI):
        return (2, term.value, 0.0, "", "", "")
    if term.is_numeric():
        try:
            return (3, "", float(term.numeric_value()), term.lexical, term.datatype or "", "")
        except ValueError:
            pass
    return (4, "", 0.0, term.lexical, term.datatype or "", term.language or "")


def evaluate(dataset, query):
    """Evaluate a parsed SelectQuery against a DatasetView."""
    solutions = _eval_group(query.where, dataset, None, [{}])
    names = [v.name for v in query.variables]

    if query.order_by:
        # sort before projection (conditions may name non-projected variables),
        # tie-broken by the projected row so the order is total
        solutions.sort(key=lambda sol: tuple(term_key(sol.get(name)) for name in names))
        for condition in reversed(query.order_by):
            solutions.sort(
                key=lambda sol, n=condition.expr.name: term_key(sol.get(n)),
                reverse=condition.descending,
            )
    rows = [tuple(solution.get(name) for name in names) for solution in solutions]

    if query.distinct:
        seen = set()
        unique = []
        for row in rows:
            if row not in seen:
                seen.add(row)
                unique.append(row)
        rows = unique

    if query.offset:
        rows = rows[query.offset:]
    if query.limit is not None:
        rows = rows[: query.limit]
    return QuerySolution(variables=tuple(names), rows=rows)
