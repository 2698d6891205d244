"""First-order formulas over posets, with TPTP and s-expression forms.

The only predicate is binary ``leq``.  Connectives are kept exactly as
built -- no flattening or simplification -- so that emitted text re-parses
to a structurally identical formula.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Leq(Formula):
    lhs: str
    rhs: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    parts: tuple[Formula, ...]

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("And needs at least two parts")


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple[Formula, ...]

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("Or needs at least two parts")


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Forall(Formula):
    names: tuple[str, ...]
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    names: tuple[str, ...]
    body: Formula


def conj(parts: list[Formula]) -> Formula:
    if not parts:
        raise ValueError("empty conjunction")
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def disj(parts: list[Formula]) -> Formula:
    if not parts:
        raise ValueError("empty disjunction")
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


# ---------------------------------------------------------------------------
# TPTP (first-order form)

def to_tptp(f: Formula, name: str = "phi_star", role: str = "conjecture") -> str:
    return f"fof({name}, {role}, {_tptp(f)})."


def _tptp(f: Formula) -> str:
    if isinstance(f, Leq):
        return f"leq({f.lhs},{f.rhs})"
    if isinstance(f, Not):
        return f"~ {_tptp_arg(f.body)}"
    if isinstance(f, And):
        return "(" + " & ".join(_tptp_arg(p) for p in f.parts) + ")"
    if isinstance(f, Or):
        return "(" + " | ".join(_tptp_arg(p) for p in f.parts) + ")"
    if isinstance(f, Implies):
        return f"({_tptp_arg(f.lhs)} => {_tptp_arg(f.rhs)})"
    if isinstance(f, Forall):
        return f"! [{','.join(f.names)}] : {_tptp_arg(f.body)}"
    if isinstance(f, Exists):
        return f"? [{','.join(f.names)}] : {_tptp_arg(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def _tptp_arg(f: Formula) -> str:
    if isinstance(f, Leq):
        return _tptp(f)
    if isinstance(f, Not):
        return _tptp(f)
    if isinstance(f, (Forall, Exists)):
        return f"({_tptp(f)})"
    return _tptp(f)  # And/Or/Implies already parenthesize themselves


_TPTP_TOKEN = re.compile(r"\s*(=>|[()\[\],:.&|~]|[A-Za-z0-9_]+)")


class FormulaParseError(Exception):
    pass


class _TptpReader:
    def __init__(self, text: str):
        self.toks: list[str] = []
        pos = 0
        while pos < len(text):
            m = _TPTP_TOKEN.match(text, pos)
            if m is None:
                if text[pos:].strip():
                    raise FormulaParseError(
                        f"bad TPTP input near {text[pos:pos + 20]!r}")
                break
            self.toks.append(m.group(1))
            pos = m.end()
        self.pos = 0

    def peek(self) -> str | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        if self.pos >= len(self.toks):
            raise FormulaParseError("unexpected end of input")
        tok = self.toks[self.pos]
        self.pos += 1
        if expected is not None and tok != expected:
            raise FormulaParseError(f"expected {expected!r}, got {tok!r}")
        return tok

    def formula(self) -> Formula:
        first = self.unit()
        op = self.peek()
        if op not in ("&", "|", "=>"):
            return first
        parts = [first]
        while self.peek() == op:
            self.take()
            parts.append(self.unit())
            if op == "=>" and len(parts) > 2:
                raise FormulaParseError("'=>' is binary")
        nxt = self.peek()
        if nxt in ("&", "|", "=>") and nxt != op:
            raise FormulaParseError(f"mixed {op!r} and {nxt!r} without parentheses")
        if op == "&":
            return And(tuple(parts))
        if op == "|":
            return Or(tuple(parts))
        return Implies(parts[0], parts[1])

    def unit(self) -> Formula:
        tok = self.take()
        if tok == "~":
            return Not(self.unit())
        if tok == "(":
            inner = self.formula()
            self.take(")")
            return inner
        if tok in ("!", "?"):
            self.take("[")
            names = [self.take()]
            while self.peek() == ",":
                self.take()
                names.append(self.take())
            self.take("]")
            self.take(":")
            body = self.unit()
            cls = Forall if tok == "!" else Exists
            return cls(tuple(names), body)
        if tok == "leq":
            self.take("(")
            lhs = self.take()
            self.take(",")
            rhs = self.take()
            self.take(")")
            return Leq(lhs, rhs)
        raise FormulaParseError(f"unexpected token {tok!r}")


def parse_tptp(text: str) -> tuple[str, str, Formula]:
    """Parse one fof(...) unit; returns (name, role, formula)."""
    r = _TptpReader(text)
    r.take("fof")
    r.take("(")
    name = r.take()
    r.take(",")
    role = r.take()
    r.take(",")
    f = r.formula()
    r.take(")")
    r.take(".")
    if r.peek() is not None:
        raise FormulaParseError(f"trailing input: {r.peek()!r}")
    return name, role, f


# ---------------------------------------------------------------------------
# S-expression debug form

def to_sexp(f: Formula) -> str:
    if isinstance(f, Leq):
        return f"(leq {f.lhs} {f.rhs})"
    if isinstance(f, Not):
        return f"(not {to_sexp(f.body)})"
    if isinstance(f, And):
        return "(and " + " ".join(to_sexp(p) for p in f.parts) + ")"
    if isinstance(f, Or):
        return "(or " + " ".join(to_sexp(p) for p in f.parts) + ")"
    if isinstance(f, Implies):
        return f"(implies {to_sexp(f.lhs)} {to_sexp(f.rhs)})"
    if isinstance(f, Forall):
        return f"(forall ({' '.join(f.names)}) {to_sexp(f.body)})"
    if isinstance(f, Exists):
        return f"(exists ({' '.join(f.names)}) {to_sexp(f.body)})"
    raise TypeError(f"not a formula: {f!r}")


def parse_sexp(text: str) -> Formula:
    toks = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(toks):
            raise FormulaParseError("unexpected end of s-expression")
        tok = toks[pos]
        pos += 1
        if tok == "(":
            items = []
            while toks[pos] != ")":
                items.append(read())
            pos += 1
            return items
        if tok == ")":
            raise FormulaParseError("unbalanced ')'")
        return tok

    def build(node) -> Formula:
        if not isinstance(node, list) or not node:
            raise FormulaParseError(f"expected a form, got {node!r}")
        head = node[0]
        if head == "leq" and len(node) == 3:
            return Leq(node[1], node[2])
        if head == "not" and len(node) == 2:
            return Not(build(node[1]))
        if head == "and":
            return And(tuple(build(p) for p in node[1:]))
        if head == "or":
            return Or(tuple(build(p) for p in node[1:]))
        if head == "implies" and len(node) == 3:
            return Implies(build(node[1]), build(node[2]))
        if head in ("forall", "exists") and len(node) == 3:
            names = node[1]
            if not isinstance(names, list):
                raise FormulaParseError("quantifier needs a name list")
            cls = Forall if head == "forall" else Exists
            return cls(tuple(names), build(node[2]))
        raise FormulaParseError(f"bad form {node!r}")

    out = build(read())
    if pos != len(toks):
        raise FormulaParseError("trailing s-expression input")
    return out


def formula_size(f: Formula) -> int:
    if isinstance(f, Leq):
        return 1
    if isinstance(f, Not):
        return 1 + formula_size(f.body)
    if isinstance(f, (And, Or)):
        return 1 + sum(formula_size(p) for p in f.parts)
    if isinstance(f, Implies):
        return 1 + formula_size(f.lhs) + formula_size(f.rhs)
    if isinstance(f, (Forall, Exists)):
        return 1 + formula_size(f.body)
    raise TypeError(f"not a formula: {f!r}")
