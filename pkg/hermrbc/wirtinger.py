# -*- coding: utf-8 -*-
"""Expressions in chart variables z_k and their conjugates, treated as independent.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' ['-'] integer)?
    base   := number | 'i' | 'z'k | 'zb'k | param-name | 'normsq(z)' | '(' expr ')'

``zb``k denotes the conjugate of z_k, ``normsq(z)`` expands to the sum of z_k zb_k.
Parameters are bound to real values at parse time.
"""
# pylint: disable=too-few-public-methods
from typing import Callable, Dict, List, Optional, Sequence, Tuple
from dataclasses import dataclass
import re
import numpy as np
from hermrbc import exceptions

POLE_TOL = 1e-12

_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)
_VARIABLE = re.compile(r"(zb|z)(\d+)")


@dataclass
class Jet2:
    """Value, first Wirtinger derivatives and mixed second derivatives at a point.

    :param value: f(p).
    :param d1_hol: df/dz_i.
    :param d1_anti: df/dzb_j.
    :param d2_mixed: d2f/dz_i dzb_j, indexed [i, j].
    """
    value: complex
    d1_hol: np.ndarray
    d1_anti: np.ndarray
    d2_mixed: np.ndarray

    @classmethod
    def constant(cls, value: complex, n: int) -> "Jet2":
        return cls(complex(value), np.zeros(n, dtype=complex), np.zeros(n, dtype=complex),
                   np.zeros((n, n), dtype=complex))

    def __add__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value + other.value, self.d1_hol + other.d1_hol,
                    self.d1_anti + other.d1_anti, self.d2_mixed + other.d2_mixed)

    def __sub__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value - other.value, self.d1_hol - other.d1_hol,
                    self.d1_anti - other.d1_anti, self.d2_mixed - other.d2_mixed)

    def __neg__(self) -> "Jet2":
        return Jet2(-self.value, -self.d1_hol, -self.d1_anti, -self.d2_mixed)

    def __mul__(self, other: "Jet2") -> "Jet2":
        a, b = self, other
        return Jet2(
            a.value * b.value,
            a.value * b.d1_hol + b.value * a.d1_hol,
            a.value * b.d1_anti + b.value * a.d1_anti,
            a.d2_mixed * b.value + a.value * b.d2_mixed
            + np.outer(a.d1_hol, b.d1_anti) + np.outer(b.d1_hol, a.d1_anti)
        )

    def reciprocal(self) -> "Jet2":
        v = self.value
        return Jet2(
            1 / v, -self.d1_hol / v ** 2, -self.d1_anti / v ** 2,
            -self.d2_mixed / v ** 2 + 2 * np.outer(self.d1_hol, self.d1_anti) / v ** 3
        )

    def power(self, k: int) -> "Jet2":
        n = self.d1_hol.shape[0]
        if k == 0:
            return Jet2.constant(1, n)
        v = self.value
        first = k * v ** (k - 1)
        d2 = first * self.d2_mixed
        if k != 1:
            d2 = d2 + k * (k - 1) * v ** (k - 2) * np.outer(self.d1_hol, self.d1_anti)
        return Jet2(v ** k, first * self.d1_hol, first * self.d1_anti, d2)


@dataclass
class HolomorphicJet:
    """Value, df/dz_i and pure d2f/dz_i dz_j of a conjugate-free expression."""
    value: complex
    d1: np.ndarray
    d2: np.ndarray

    @classmethod
    def constant(cls, value: complex, n: int) -> "HolomorphicJet":
        return cls(complex(value), np.zeros(n, dtype=complex), np.zeros((n, n), dtype=complex))

    def __add__(self, other: "HolomorphicJet") -> "HolomorphicJet":
        return HolomorphicJet(self.value + other.value, self.d1 + other.d1, self.d2 + other.d2)

    def __sub__(self, other: "HolomorphicJet") -> "HolomorphicJet":
        return HolomorphicJet(self.value - other.value, self.d1 - other.d1, self.d2 - other.d2)

    def __neg__(self) -> "HolomorphicJet":
        return HolomorphicJet(-self.value, -self.d1, -self.d2)

    def __mul__(self, other: "HolomorphicJet") -> "HolomorphicJet":
        a, b = self, other
        return HolomorphicJet(
            a.value * b.value, a.value * b.d1 + b.value * a.d1,
            a.d2 * b.value + a.value * b.d2 + np.outer(a.d1, b.d1) + np.outer(b.d1, a.d1)
        )

    def reciprocal(self) -> "HolomorphicJet":
        v = self.value
        return HolomorphicJet(1 / v, -self.d1 / v ** 2, -self.d2 / v ** 2 + 2 * np.outer(self.d1, self.d1) / v ** 3)

    def power(self, k: int) -> "HolomorphicJet":
        n = self.d1.shape[0]
        if k == 0:
            return HolomorphicJet.constant(1, n)
        v = self.value
        first = k * v ** (k - 1)
        d2 = first * self.d2
        if k != 1:
            d2 = d2 + k * (k - 1) * v ** (k - 2) * np.outer(self.d1, self.d1)
        return HolomorphicJet(v ** k, first * self.d1, d2)


def _real(x: float) -> str:
    if x < 0 or (x == 0 and str(x).startswith("-")):
        return f"(-{repr(-x if x else 0.0)})"
    return repr(float(x))


class Expr:
    """Immutable expression node."""

    def evaluate(self, p: Sequence[complex]) -> complex:
        """Value at point p (0-based sequence of complex coordinates)."""
        raise NotImplementedError

    def jet(self, p: Sequence[complex], n: int) -> Jet2:
        raise NotImplementedError

    def holomorphic_jet(self, p: Sequence[complex], n: int) -> HolomorphicJet:
        raise NotImplementedError

    def conjugate(self) -> "Expr":
        raise NotImplementedError

    def children(self) -> Tuple["Expr", ...]:
        return ()

    def walk(self):
        """Yield every node of the tree."""
        yield self
        for child in self.children():
            yield from child.walk()

    def is_holomorphic(self) -> bool:
        return not any(isinstance(node, Var) and node.conjugated for node in self.walk())

    def is_constant(self) -> bool:
        return not any(isinstance(node, Var) for node in self.walk())

    def __mul__(self, other: "Expr") -> "Expr":
        return Mul(self, other)

    def __add__(self, other: "Expr") -> "Expr":
        return Add(self, other)


@dataclass(frozen=True)
class Const(Expr):
    value: complex

    def evaluate(self, p):
        return self.value

    def jet(self, p, n):
        return Jet2.constant(self.value, n)

    def holomorphic_jet(self, p, n):
        return HolomorphicJet.constant(self.value, n)

    def conjugate(self):
        return Const(complex(self.value).conjugate())

    def __str__(self):
        value = complex(self.value)
        if value == 1j:
            return "i"
        if value.imag == 0:
            return _real(value.real)
        if value.real == 0:
            return f"({_real(value.imag)} * i)"
        return f"({_real(value.real)} + ({_real(value.imag)} * i))"


@dataclass(frozen=True)
class Var(Expr):
    """z_index, or its conjugate; index is 1-based."""
    index: int
    conjugated: bool = False

    def evaluate(self, p):
        value = complex(p[self.index - 1])
        return value.conjugate() if self.conjugated else value

    def jet(self, p, n):
        result = Jet2.constant(self.evaluate(p), n)
        if self.conjugated:
            result.d1_anti[self.index - 1] = 1
        else:
            result.d1_hol[self.index - 1] = 1
        return result

    def holomorphic_jet(self, p, n):
        if self.conjugated:
            raise exceptions.NonHolomorphicMap(f"Conjugated variable '{self}' in holomorphic expression")
        result = HolomorphicJet.constant(self.evaluate(p), n)
        result.d1[self.index - 1] = 1
        return result

    def conjugate(self):
        return Var(self.index, not self.conjugated)

    def __str__(self):
        return f"{'zb' if self.conjugated else 'z'}{self.index}"


@dataclass(frozen=True)
class Param(Expr):
    name: str
    value: float

    def evaluate(self, p):
        return complex(self.value)

    def jet(self, p, n):
        return Jet2.constant(self.value, n)

    def holomorphic_jet(self, p, n):
        return HolomorphicJet.constant(self.value, n)

    def conjugate(self):
        return self

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    def evaluate(self, p):
        return -self.arg.evaluate(p)

    def jet(self, p, n):
        return -self.arg.jet(p, n)

    def holomorphic_jet(self, p, n):
        return -self.arg.holomorphic_jet(p, n)

    def conjugate(self):
        return Neg(self.arg.conjugate())

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True)
class Binary(Expr):
    left: Expr
    right: Expr
    symbol = "?"

    def children(self):
        return self.left, self.right

    def conjugate(self):
        return type(self)(self.left.conjugate(), self.right.conjugate())

    def __str__(self):
        return f"({self.left} {self.symbol} {self.right})"


class Add(Binary):
    symbol = "+"

    def evaluate(self, p):
        return self.left.evaluate(p) + self.right.evaluate(p)

    def jet(self, p, n):
        return self.left.jet(p, n) + self.right.jet(p, n)

    def holomorphic_jet(self, p, n):
        return self.left.holomorphic_jet(p, n) + self.right.holomorphic_jet(p, n)


class Sub(Binary):
    symbol = "-"

    def evaluate(self, p):
        return self.left.evaluate(p) - self.right.evaluate(p)

    def jet(self, p, n):
        return self.left.jet(p, n) - self.right.jet(p, n)

    def holomorphic_jet(self, p, n):
        return self.left.holomorphic_jet(p, n) - self.right.holomorphic_jet(p, n)


class Mul(Binary):
    symbol = "*"

    def evaluate(self, p):
        return self.left.evaluate(p) * self.right.evaluate(p)

    def jet(self, p, n):
        return self.left.jet(p, n) * self.right.jet(p, n)

    def holomorphic_jet(self, p, n):
        return self.left.holomorphic_jet(p, n) * self.right.holomorphic_jet(p, n)


class Div(Binary):
    symbol = "/"

    def _check(self, value: complex):
        if abs(value) <= POLE_TOL:
            raise exceptions.EvaluationError(str(self.right), "Division by zero")

    def evaluate(self, p):
        denominator = self.right.evaluate(p)
        self._check(denominator)
        return self.left.evaluate(p) / denominator

    def jet(self, p, n):
        denominator = self.right.jet(p, n)
        self._check(denominator.value)
        return self.left.jet(p, n) * denominator.reciprocal()

    def holomorphic_jet(self, p, n):
        denominator = self.right.holomorphic_jet(p, n)
        self._check(denominator.value)
        return self.left.holomorphic_jet(p, n) * denominator.reciprocal()


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def _check(self, value: complex):
        if self.exponent < 0 and abs(value) <= POLE_TOL:
            raise exceptions.EvaluationError(str(self.base), "Negative power of zero")

    def evaluate(self, p):
        value = self.base.evaluate(p)
        self._check(value)
        return value ** self.exponent

    def jet(self, p, n):
        base = self.base.jet(p, n)
        self._check(base.value)
        return base.power(self.exponent)

    def holomorphic_jet(self, p, n):
        base = self.base.holomorphic_jet(p, n)
        self._check(base.value)
        return base.power(self.exponent)

    def conjugate(self):
        return Pow(self.base.conjugate(), self.exponent)

    def children(self):
        return (self.base,)

    def __str__(self):
        return f"({self.base}^{self.exponent})"


def normsq(n: int, offset: int = 0, count: int = None) -> Expr:
    """Sum of z_k zb_k over k = offset+1 .. offset+count."""
    indices = range(offset + 1, offset + (n if count is None else count) + 1)
    terms = [Mul(Var(k), Var(k, True)) for k in indices]
    result = terms[0]
    for term in terms[1:]:
        result = Add(result, term)
    return result


class _Parser:
    """Recursive descent parser over the token stream."""

    def __init__(self, text: str, n: int, params: Dict[str, float]):
        self.text = text
        self.n = n
        self.params = params
        self.tokens = self.tokenize(text)
        self.index = 0

    @staticmethod
    def tokenize(text: str) -> List[Tuple[str, str, int]]:
        tokens, position = [], 0
        while position < len(text):
            if text[position:].strip() == "":
                break
            match = _TOKEN.match(text, position)
            if not match:
                stripped = len(text[position:]) - len(text[position:].lstrip())
                raise exceptions.ExpressionSyntaxError(position + stripped, f"Unexpected character in '{text}'")
            kind = match.lastgroup
            tokens.append((kind, match.group(kind), match.start(kind)))
            position = match.end()
        tokens.append(("end", "", len(text)))
        return tokens

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.index]

    def take(self, value: str = None) -> Tuple[str, str, int]:
        token = self.tokens[self.index]
        if value is not None and token[1] != value:
            raise exceptions.ExpressionSyntaxError(token[2], f"Expected '{value}', found '{token[1] or 'end'}'")
        self.index += 1
        return token

    def parse(self) -> Expr:
        result = self.expr()
        token = self.peek()
        if token[0] != "end":
            raise exceptions.ExpressionSyntaxError(token[2], f"Unexpected '{token[1]}'")
        return result

    def expr(self) -> Expr:
        result = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            operator = self.take()[1]
            right = self.term()
            result = Add(result, right) if operator == "+" else Sub(result, right)
        return result

    def term(self) -> Expr:
        result = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            operator = self.take()[1]
            right = self.factor()
            result = Mul(result, right) if operator == "*" else Div(result, right)
        return result

    def factor(self) -> Expr:
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return Neg(self.factor())
        base = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, value, position = self.take()
            if kind != "number" or not value.isdigit():
                raise exceptions.ExpressionSyntaxError(position, "Exponent must be an integer")
            return Pow(base, sign * int(value))
        return base

    def base(self) -> Expr:
        kind, value, position = self.take()
        if kind == "number":
            return Const(float(value))
        if kind == "op" and value == "(":
            result = self.expr()
            self.take(")")
            return result
        if kind == "name":
            return self.name(value, position)
        raise exceptions.ExpressionSyntaxError(position, f"Unexpected '{value or 'end'}'")

    def name(self, value: str, position: int) -> Expr:
        if value == "i":
            return Const(1j)
        if value == "normsq":
            self.take("(")
            self.take("z")
            self.take(")")
            return normsq(self.n)
        match = _VARIABLE.fullmatch(value)
        if match:
            index = int(match.group(2))
            if not 1 <= index <= self.n:
                raise exceptions.VariableIndexError(
                    f"Variable '{value}' at position {position} out of range 1..{self.n}"
                )
            return Var(index, match.group(1) == "zb")
        if value in self.params:
            return Param(value, float(self.params[value]))
        raise exceptions.UnknownParameter(f"Unknown parameter '{value}' at position {position}")


def parse(text: str, n: int, params: Dict[str, float] = None) -> Expr:
    """Parse an expression string.

    :param text: expression text.
    :param n: chart dimension, variables are z1..zn.
    :param params: parameter values bound at parse time.
    :return: expression tree.
    """
    return _Parser(text, n, params or {}).parse()


def _point(p: Sequence[complex]) -> np.ndarray:
    return np.asarray(p, dtype=complex).reshape(-1)


def jet2(e: Expr, p: Sequence[complex]) -> Jet2:
    """Exact value, first derivatives and mixed second derivatives.

    :param e: expression.
    :param p: point in C^n.
    :return: jet at p.
    """
    p = _point(p)
    return e.jet(p, p.shape[0])


def holomorphic_jet2(e: Expr, p: Sequence[complex]) -> HolomorphicJet:
    """Exact value, df/dz_i and d2f/dz_i dz_j of a conjugate-free expression."""
    if not e.is_holomorphic():
        raise exceptions.NonHolomorphicMap(f"Expression '{e}' contains conjugated variables")
    p = _point(p)
    return e.holomorphic_jet(p, p.shape[0])


def fd_wirtinger(func: Callable[[np.ndarray], object], p: Sequence[complex],
                 step: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Central finite differences over real and imaginary parts.

    ``func`` may return a scalar or an array of shape S.

    :param func: function of a complex point.
    :param p: point in C^n.
    :param step: step in (0, 0.1].
    :return: value (S), d/dz (n, *S), d/dzb (n, *S), d2/dz_i dzb_j (n, n, *S).
    """
    if not 0 < step <= 0.1:
        raise exceptions.ConfigError(f"Finite difference step must lie in (0, 0.1], got {step}")
    p = _point(p)
    n = p.shape[0]
    x = np.concatenate([p.real, p.imag])

    def call(shift: Dict[int, float]) -> np.ndarray:
        y = x.copy()
        for axis, delta in shift.items():
            y[axis] += delta
        return np.asarray(func(y[:n] + 1j * y[n:]), dtype=complex)

    h = step
    center = call({})
    first, second = [], {}
    for a in range(2 * n):
        plus, minus = call({a: h}), call({a: -h})
        first.append((plus - minus) / (2 * h))
        second[a, a] = (plus - 2 * center + minus) / h ** 2
    for a in range(2 * n):
        for b in range(a + 1, 2 * n):
            second[a, b] = second[b, a] = (
                call({a: h, b: h}) - call({a: h, b: -h}) - call({a: -h, b: h}) + call({a: -h, b: -h})
            ) / (4 * h ** 2)
    d_hol = np.stack([(first[k] - 1j * first[n + k]) / 2 for k in range(n)])
    d_anti = np.stack([(first[k] + 1j * first[n + k]) / 2 for k in range(n)])
    d2 = np.stack([
        np.stack([
            (second[i, j] + second[n + i, n + j] + 1j * (second[i, n + j] - second[n + i, j])) / 4
            for j in range(n)
        ]) for i in range(n)
    ])
    return center, d_hol, d_anti, d2


def richardson(func: Callable[[np.ndarray], object], p: Sequence[complex], step: float):
    """Fourth order combination (4 D(h/2) - D(h)) / 3 of two fd_wirtinger runs."""
    coarse = fd_wirtinger(func, p, step)
    fine = fd_wirtinger(func, p, step / 2)
    return tuple(c if k == 0 else (4 * f - c) / 3 for k, (c, f) in enumerate(zip(coarse, fine)))


def fd_jet2(e: Expr, p: Sequence[complex], step: float = 1e-4) -> Jet2:
    """Finite difference jet, an independent oracle for jet2.

    :param e: expression.
    :param p: point in C^n.
    :param step: step in (0, 0.1].
    :return: jet at p.
    """
    value, d_hol, d_anti, d2 = fd_wirtinger(e.evaluate, p, step)
    return Jet2(complex(value), d_hol, d_anti, d2)


def variables(e: Expr) -> Optional[int]:
    """Largest variable index used, None for constants."""
    indices = [node.index for node in e.walk() if isinstance(node, Var)]
    return max(indices) if indices else None
