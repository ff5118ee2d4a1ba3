"""
Compilador de expresiones aritméticas por descenso recursivo.

Gramática:
    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := número | 'pi' | variable | función '(' expr ')' | '(' expr ')'

Funciones: exp, log, sin, cos. La expresión se compila a un cierre sobre
numpy; no se usa eval.
"""

import re
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
from numpy.typing import NDArray

from genfrac.core.errors import ExpressionSyntaxError

Env = Mapping[str, NDArray[np.float64]]
Node = Callable[[Env], NDArray[np.float64]]

FUNCTIONS: dict[str, Callable[[NDArray[np.float64]], NDArray[np.float64]]] = {
    "exp": np.exp,
    "log": np.log,
    "sin": np.sin,
    "cos": np.cos,
}
CONSTANTS = {"pi": float(np.pi)}

_TOKEN = re.compile(
    r"(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^()])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    position = 0
    while True:
        while position < len(text) and text[position].isspace():
            position += 1
        if position == len(text):
            tokens.append(Token("end", "", position))
            return tokens
        match = _TOKEN.match(text, position)
        if match is None or match.end() == position:
            raise ExpressionSyntaxError(text, position, ["número", "nombre", "operador"])
        kind = match.lastgroup or "op"
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _fail(self, expected: Sequence[str]) -> ExpressionSyntaxError:
        return ExpressionSyntaxError(self.text, self.current.position, expected)

    def _accept(self, *ops: str) -> bool:
        return self.current.kind == "op" and self.current.text in ops

    def parse(self) -> Node:
        node = self._expr()
        if self.current.kind != "end":
            raise self._fail(["operador", "fin de texto"])
        return node

    def _expr(self) -> Node:
        node = self._term()
        while self._accept("+", "-"):
            op = self._advance().text
            node = _binary(op, node, self._term())
        return node

    def _term(self) -> Node:
        node = self._unary()
        while self._accept("*", "/"):
            op = self._advance().text
            node = _binary(op, node, self._unary())
        return node

    def _unary(self) -> Node:
        if self._accept("-"):
            self._advance()
            inner = self._unary()
            return lambda env: -inner(env)
        if self._accept("+"):
            self._advance()
            return self._unary()
        return self._power()

    def _power(self) -> Node:
        base = self._atom()
        if self._accept("^"):
            self._advance()
            return _binary("^", base, self._unary())
        return base

    def _atom(self) -> Node:
        token = self.current
        if token.kind == "num":
            self._advance()
            value = float(token.text)
            return lambda env: np.asarray(value)
        if token.kind == "name":
            self._advance()
            return self._named(token)
        if self._accept("("):
            self._advance()
            node = self._expr()
            if not self._accept(")"):
                raise self._fail(["')'"])
            self._advance()
            return node
        raise self._fail(["número", "variable", "función", "'('"])

    def _named(self, token: Token) -> Node:
        name = token.text
        if name in FUNCTIONS:
            if not self._accept("("):
                raise self._fail(["'('"])
            self._advance()
            arg = self._expr()
            if not self._accept(")"):
                raise self._fail(["')'"])
            self._advance()
            fn = FUNCTIONS[name]
            return lambda env: fn(arg(env))
        if name in CONSTANTS:
            value = CONSTANTS[name]
            return lambda env: np.asarray(value)
        if name in self.variables:
            return lambda env: np.asarray(env[name], dtype=float)
        expected = [*self.variables, *CONSTANTS, *FUNCTIONS]
        raise ExpressionSyntaxError(self.text, token.position, expected)


def _binary(op: str, left: Node, right: Node) -> Node:
    if op == "+":
        return lambda env: left(env) + right(env)
    if op == "-":
        return lambda env: left(env) - right(env)
    if op == "*":
        return lambda env: left(env) * right(env)
    if op == "/":
        return lambda env: left(env) / right(env)
    return lambda env: np.power(left(env), right(env))


@dataclass(frozen=True)
class Expression:
    """Expresión compilada; se llama con los valores de las variables en orden."""

    text: str
    variables: tuple[str, ...]
    node: Node

    def __call__(self, *args: NDArray[np.float64]) -> NDArray[np.float64]:
        if len(args) != len(self.variables):
            raise TypeError(f"se esperaban {len(self.variables)} argumentos")
        env = dict(zip(self.variables, args))
        shape = np.broadcast_shapes(*(np.shape(a) for a in args)) if args else ()
        with np.errstate(all="ignore"):
            out = np.asarray(self.node(env), dtype=float)
        return np.broadcast_to(out, shape).astype(float)


def compile_expression(text: str, variables: Sequence[str] = ("t",)) -> Expression:
    """
    Compila `text` a una función vectorizada de las variables dadas.

    Raises:
        ExpressionSyntaxError: Con la posición y los tokens esperados
    """
    node = _Parser(text, variables).parse()
    return Expression(text=text, variables=tuple(variables), node=node)
