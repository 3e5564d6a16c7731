"""Netlist language for two-port interferometer circuits.

Grammar (keywords lowercase and case-sensitive, ``#`` comments to end of
line, whitespace free-form)::

    circuit = { stmt }
    stmt    = "bs"
            | "ps" arm "(" phase ")"
            | "loss" "(" float ")"
            | "d" | "dprime" | "ccd"
            | "repeat" int "{" { stmt } "}"
    arm     = "upper" | "lower"
    phase   = [float "*"] "phi" | float ["pi"]

``phi`` is the sweep variable bound at compile time; a trailing ``pi``
multiplies the literal by pi (``0.5 pi`` is a quarter turn).  Numbers are
decimals with optional sign and exponent.  Circuit files use the ``.icd``
extension, UTF-8, LF or CRLF line endings.

Statements appear in the order the light traverses them, so the compiled
transfer matrix is the reversed product: the last statement becomes the
leftmost factor.  The macros expand before compilation --
``d``  -> ``bs  ps lower(phi)  bs``,
``dprime`` -> ``bs  ps upper(phi)  bs``,
``ccd`` -> ``d`` then ``dprime`` -- and ``repeat`` blocks unroll eagerly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .elements import beam_splitter, loss, phase_lower, phase_upper
from .errors import ValidationError
from .linalg import IDENTITY

CIRCUIT_FILE_EXTENSION = ".icd"


class CircuitSyntaxError(ValueError):
    """Parse failure at a specific 1-based line and column."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


def _require_finite(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{what} must be finite, got {value!r}")
    return value


# --- phase expressions -------------------------------------------------


@dataclass(frozen=True)
class SweepVar:
    """scale * phi, phi being the sweep variable."""

    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "scale", _require_finite(self.scale, "sweep scale"))


@dataclass(frozen=True)
class Literal:
    """A fixed phase in radians."""

    radians: float

    def __post_init__(self):
        object.__setattr__(self, "radians", _require_finite(self.radians, "phase literal"))


@dataclass(frozen=True)
class LiteralPi:
    """multiplier * pi."""

    multiplier: float

    def __post_init__(self):
        object.__setattr__(self, "multiplier", _require_finite(self.multiplier, "pi multiplier"))


PhaseExpr = SweepVar | Literal | LiteralPi


def phase_value(expr: PhaseExpr, phi: float) -> float:
    if isinstance(expr, SweepVar):
        return expr.scale * phi
    if isinstance(expr, Literal):
        return expr.radians
    if isinstance(expr, LiteralPi):
        return expr.multiplier * math.pi
    raise ValidationError(f"not a phase expression: {expr!r}")


# --- statements ---------------------------------------------------------


@dataclass(frozen=True)
class Bs:
    pass


@dataclass(frozen=True)
class Ps:
    arm: str
    phase: PhaseExpr

    def __post_init__(self):
        if self.arm not in ("upper", "lower"):
            raise ValidationError(f"arm must be 'upper' or 'lower', got {self.arm!r}")
        if not isinstance(self.phase, (SweepVar, Literal, LiteralPi)):
            raise ValidationError(f"not a phase expression: {self.phase!r}")


@dataclass(frozen=True)
class Loss:
    t: float

    def __post_init__(self):
        t = _require_finite(self.t, "loss factor")
        if not 0.0 < t <= 1.0:
            raise ValidationError(f"loss factor must lie in (0, 1], got {t!r}")
        object.__setattr__(self, "t", t)


@dataclass(frozen=True)
class D:
    pass


@dataclass(frozen=True)
class DPrime:
    pass


@dataclass(frozen=True)
class Ccd:
    pass


@dataclass(frozen=True)
class Repeat:
    count: int
    body: tuple

    def __post_init__(self):
        if not isinstance(self.count, (int, np.integer)) or self.count < 1:
            raise ValidationError(f"repeat count must be a positive integer, got {self.count!r}")
        object.__setattr__(self, "body", tuple(self.body))


Stmt = Bs | Ps | Loss | D | DPrime | Ccd | Repeat


@dataclass(frozen=True)
class Circuit:
    statements: tuple

    def __post_init__(self):
        object.__setattr__(self, "statements", tuple(self.statements))


# --- lexer --------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<WS>[ \t\r]+)"
    r"|(?P<COMMENT>#[^\n]*)"
    r"|(?P<NL>\n)"
    r"|(?P<NUMBER>[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<NAME>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<PUNCT>[(){}*])"
)


def _tokenize(text: str) -> list:
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise CircuitSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        col = m.start() - line_start + 1
        if kind == "NL":
            line += 1
            line_start = m.end()
        elif kind == "PUNCT":
            tokens.append(_Token(m.group(), m.group(), line, col))
        elif kind not in ("WS", "COMMENT"):
            tokens.append(_Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(_Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


# --- parser -------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list):
        self._tokens = tokens
        self._pos = 0

    def peek(self) -> _Token:
        return self._tokens[self._pos]

    def advance(self) -> _Token:
        tok = self._tokens[self._pos]
        if tok.kind != "EOF":
            self._pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(f"expected {what}, got {tok.text!r}" if tok.text else f"expected {what}")
        return self.advance()

    def fail(self, message: str):
        tok = self.peek()
        raise CircuitSyntaxError(message, tok.line, tok.col)

    def parse_circuit(self) -> Circuit:
        stmts = self.parse_statements(stop_at_brace=False)
        return Circuit(tuple(stmts))

    def parse_statements(self, stop_at_brace: bool) -> list:
        stmts = []
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                if stop_at_brace:
                    self.fail("expected '}' before end of input")
                return stmts
            if tok.kind == "}":
                if stop_at_brace:
                    return stmts
                self.fail("'}' without a matching 'repeat'")
            stmts.append(self.parse_statement())

    def parse_statement(self) -> Stmt:
        tok = self.peek()
        if tok.kind != "NAME":
            self.fail(f"expected a statement keyword, got {tok.text!r}")
        if tok.text == "bs":
            self.advance()
            return Bs()
        if tok.text == "d":
            self.advance()
            return D()
        if tok.text == "dprime":
            self.advance()
            return DPrime()
        if tok.text == "ccd":
            self.advance()
            return Ccd()
        if tok.text == "ps":
            self.advance()
            arm_tok = self.peek()
            if arm_tok.kind != "NAME" or arm_tok.text not in ("upper", "lower"):
                self.fail(f"expected arm 'upper' or 'lower', got {arm_tok.text!r}")
            self.advance()
            self.expect("(", "'('")
            phase = self.parse_phase()
            self.expect(")", "')'")
            return Ps(arm_tok.text, phase)
        if tok.text == "loss":
            self.advance()
            self.expect("(", "'('")
            num_tok = self.expect("NUMBER", "a loss factor")
            t = self.token_float(num_tok)
            if not 0.0 < t <= 1.0:
                raise CircuitSyntaxError(
                    f"loss factor must lie in (0, 1], got {num_tok.text}",
                    num_tok.line,
                    num_tok.col,
                )
            self.expect(")", "')'")
            return Loss(t)
        if tok.text == "repeat":
            self.advance()
            count_tok = self.expect("NUMBER", "a repeat count")
            if not count_tok.text.isdigit() or int(count_tok.text) < 1:
                raise CircuitSyntaxError(
                    f"repeat count must be a positive integer, got {count_tok.text}",
                    count_tok.line,
                    count_tok.col,
                )
            self.expect("{", "'{'")
            body = self.parse_statements(stop_at_brace=True)
            self.expect("}", "'}'")
            return Repeat(int(count_tok.text), tuple(body))
        self.fail(f"unknown statement keyword {tok.text!r}")

    def parse_phase(self) -> PhaseExpr:
        tok = self.peek()
        if tok.kind == "NAME" and tok.text == "phi":
            self.advance()
            return SweepVar(1.0)
        if tok.kind == "NUMBER":
            self.advance()
            value = self.token_float(tok)
            nxt = self.peek()
            if nxt.kind == "*":
                self.advance()
                phi_tok = self.peek()
                if phi_tok.kind != "NAME" or phi_tok.text != "phi":
                    self.fail(f"expected 'phi' after '*', got {phi_tok.text!r}")
                self.advance()
                return SweepVar(value)
            if nxt.kind == "NAME" and nxt.text == "pi":
                self.advance()
                return LiteralPi(value)
            return Literal(value)
        self.fail(f"expected a phase expression, got {tok.text!r}")

    def token_float(self, tok: _Token) -> float:
        value = float(tok.text)
        if math.isinf(value):
            raise CircuitSyntaxError(
                f"number {tok.text} overflows a double", tok.line, tok.col
            )
        return value


def parse(text: str) -> Circuit:
    """Parse netlist text into a circuit AST.

    Raises CircuitSyntaxError carrying the 1-based line and column of the
    first offending token.
    """
    return _Parser(_tokenize(text)).parse_circuit()


# --- pretty printer -----------------------------------------------------


def _format_phase(expr: PhaseExpr) -> str:
    if isinstance(expr, SweepVar):
        return "phi" if expr.scale == 1.0 else f"{expr.scale!r}*phi"
    if isinstance(expr, Literal):
        return repr(expr.radians)
    return f"{expr.multiplier!r} pi"


def _print_into(stmts, indent: int, lines: list):
    pad = "  " * indent
    for stmt in stmts:
        if isinstance(stmt, Repeat):
            lines.append(f"{pad}repeat {stmt.count} {{")
            _print_into(stmt.body, indent + 1, lines)
            lines.append(f"{pad}}}")
        elif isinstance(stmt, Bs):
            lines.append(pad + "bs")
        elif isinstance(stmt, D):
            lines.append(pad + "d")
        elif isinstance(stmt, DPrime):
            lines.append(pad + "dprime")
        elif isinstance(stmt, Ccd):
            lines.append(pad + "ccd")
        elif isinstance(stmt, Loss):
            lines.append(pad + f"loss({stmt.t!r})")
        elif isinstance(stmt, Ps):
            lines.append(pad + f"ps {stmt.arm}({_format_phase(stmt.phase)})")
        else:
            raise ValidationError(f"not a circuit statement: {stmt!r}")


def pretty_print(circuit: Circuit) -> str:
    """Canonical text form: one statement per line, two-space repeat indent.

    Re-parsing the result yields a structurally identical AST.
    """
    lines: list = []
    _print_into(circuit.statements, 0, lines)
    return "\n".join(lines)


# --- compiler -----------------------------------------------------------

_D_EXPANSION = (Bs(), Ps("lower", SweepVar(1.0)), Bs())
_DPRIME_EXPANSION = (Bs(), Ps("upper", SweepVar(1.0)), Bs())


def _expand_into(stmts, out: list):
    for stmt in stmts:
        if isinstance(stmt, (Bs, Ps, Loss)):
            out.append(stmt)
        elif isinstance(stmt, D):
            out.extend(_D_EXPANSION)
        elif isinstance(stmt, DPrime):
            out.extend(_DPRIME_EXPANSION)
        elif isinstance(stmt, Ccd):
            out.extend(_D_EXPANSION)
            out.extend(_DPRIME_EXPANSION)
        elif isinstance(stmt, Repeat):
            for _ in range(stmt.count):
                _expand_into(stmt.body, out)
        else:
            raise ValidationError(f"not a circuit statement: {stmt!r}")


def expand(circuit: Circuit) -> list:
    """Flatten macros and repeats to primitive bs / ps / loss statements."""
    out: list = []
    _expand_into(circuit.statements, out)
    return out


def compile_circuit(circuit: Circuit, phi: float) -> np.ndarray:
    """Transfer matrix of the circuit with the sweep variable bound to phi.

    Elements multiply in traversal order (last statement leftmost); an empty
    circuit compiles to the identity.
    """
    m = IDENTITY.copy()
    for stmt in expand(circuit):
        if isinstance(stmt, Bs):
            element = beam_splitter()
        elif isinstance(stmt, Ps):
            shifter = phase_lower if stmt.arm == "lower" else phase_upper
            element = shifter(phase_value(stmt.phase, phi))
        else:
            element = loss(stmt.t)
        m = element @ m
    return m
