"""
Gramáticas de texto de la CLI.

    núcleo    nombre[:clave=valor,...]       valor = número | [número,...]
    función   const:c | power:μ | poly:c0,c1,... | exp:k | csv:ARCHIVO | expr:EXPR
    ψ         identity | log | power:rho=ρ | powsigma:sigma=σ
    problema  líneas clave=valor (kernel, alpha, beta, gamma, constants,
              rhs, lipschitz, interval); '#' inicia un comentario
"""

import re
from pathlib import Path
from typing import Any, Union

from genfrac.cli.expressions import compile_expression
from genfrac.core.errors import GrammarError, KernelSpecSyntaxError, ProblemFileError
from genfrac.models.functions import ClosedFormFunction, PsiFunction, SampledFunction
from genfrac.models.kernel import KernelSpec
from genfrac.models.operators import CauchyProblem
from genfrac.services import kernel_algebra
from genfrac.services.csv_io import match_grid, read_csv

_NAME = re.compile(r"[A-Za-z_]\w*")
_NUMBER = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|[-+]?inf")

KERNEL_NAMES = ("rl", "prabhakar", "ab", "gpf", "ml", "explicit")
FUNCTION_KINDS = ("const", "power", "poly", "exp", "csv", "expr")
PROBLEM_KEYS = ("kernel", "alpha", "beta", "gamma", "constants", "rhs", "lipschitz", "interval")


# --- Núcleos ---


class _KernelParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _fail(self, expected: list[str]) -> KernelSpecSyntaxError:
        return KernelSpecSyntaxError(self.text, self.pos, expected)

    def _peek(self, char: str) -> bool:
        return self.text.startswith(char, self.pos)

    def _expect(self, char: str) -> None:
        if not self._peek(char):
            raise self._fail([repr(char)])
        self.pos += 1

    def _name(self) -> str:
        match = _NAME.match(self.text, self.pos)
        if match is None:
            raise self._fail(["nombre"])
        self.pos = match.end()
        return match.group()

    def _number(self) -> float:
        match = _NUMBER.match(self.text, self.pos)
        if match is None:
            raise self._fail(["número"])
        self.pos = match.end()
        return float(match.group())

    def _value(self) -> Union[float, list[float]]:
        if not self._peek("["):
            return self._number()
        self.pos += 1
        values = [self._number()]
        while self._peek(","):
            self.pos += 1
            values.append(self._number())
        self._expect("]")
        return values

    def parse(self) -> tuple[str, dict[str, Any]]:
        start = self.pos
        name = self._name()
        if name not in KERNEL_NAMES:
            self.pos = start
            raise self._fail(list(KERNEL_NAMES))
        params: dict[str, Any] = {}
        if self._peek(":"):
            self.pos += 1
            while True:
                key = self._name()
                self._expect("=")
                params[key] = self._value()
                if not self._peek(","):
                    break
                self.pos += 1
        if self.pos != len(self.text):
            raise self._fail(["','", "fin de texto"])
        return name, params


def parse_kernel_spec(text: str) -> KernelSpec:
    """
    `prabhakar:rho=1,omega=-1`, `explicit:coeffs=[1,0.5],radius=2`, ...

    Raises:
        KernelSpecSyntaxError: Sintaxis inválida (con posición)
        DomainError: Parámetros fuera de dominio
    """
    name, params = _KernelParser(text.strip()).parse()
    return kernel_algebra.make_kernel(name, params)  # type: ignore[arg-type]


# --- Funciones de entrada ---


def _numbers(text: str, offset: int, spec: str) -> list[float]:
    values = []
    position = offset
    for item in text.split(","):
        try:
            values.append(float(item))
        except ValueError:
            raise GrammarError(spec, position, ["número"]) from None
        position += len(item) + 1
    return values


def parse_closed_form(text: str, a: float = 0.0) -> ClosedFormFunction:
    """const:c, power:μ, poly:c0,c1,... o exp:k respecto del punto a."""
    kind, sep, body = text.partition(":")
    offset = len(kind) + len(sep)
    if kind not in ("const", "power", "poly", "exp") or not sep:
        raise GrammarError(text, 0, ["const:", "power:", "poly:", "exp:"])
    values = _numbers(body, offset, text)
    if kind != "poly" and len(values) != 1:
        raise GrammarError(text, offset, ["un único número"])
    if kind == "const":
        return ClosedFormFunction.constant(values[0])
    if kind == "power":
        return ClosedFormFunction.power(values[0], a)
    if kind == "exp":
        return ClosedFormFunction.exponential(values[0], a)
    return ClosedFormFunction.polynomial(tuple(values), a)


def parse_function_spec(text: str, a: float, b: float, n: int) -> SampledFunction:
    """
    Muestras de la función descrita por `text` en N = n subintervalos de [a, b].

    Raises:
        GrammarError: Prefijo desconocido o números mal escritos
        ExpressionSyntaxError: Expresión inválida
        DomainError: CSV en otra malla
    """
    kind, sep, body = text.partition(":")
    if not sep or kind not in FUNCTION_KINDS:
        raise GrammarError(text, 0, [f"{k}:" for k in FUNCTION_KINDS])
    if kind == "csv":
        return match_grid(read_csv(body), a, b, n)
    if kind == "expr":
        try:
            expression = compile_expression(body, ("t",))
        except GrammarError as e:
            raise type(e)(text, e.position + len(kind) + 1, e.expected) from None
        return SampledFunction.from_callable(expression, a, b, n)
    return parse_closed_form(text, a).sample(a, b, n)


# --- ψ ---


def parse_psi_spec(text: str) -> PsiFunction:
    """identity | log | power:rho=ρ | powsigma:sigma=σ."""
    name, sep, body = text.partition(":")
    expected = ["identity", "log", "power:rho=", "powsigma:sigma="]
    if name in ("identity", "log") and not sep:
        return PsiFunction.identity() if name == "identity" else PsiFunction.log()
    key = {"power": "rho", "powsigma": "sigma"}.get(name)
    if key is None:
        raise GrammarError(text, 0, expected)
    prefix = f"{key}="
    offset = len(name) + 1
    if not body.startswith(prefix):
        raise GrammarError(text, offset, [prefix])
    value = _numbers(body[len(prefix) :], offset + len(prefix), text)
    if len(value) != 1:
        raise GrammarError(text, offset + len(prefix), ["un único número"])
    if name == "power":
        return PsiFunction.power_shifted(value[0])
    return PsiFunction.power(value[0])


# --- Intervalos y listas ---


def parse_interval(text: str) -> tuple[float, float]:
    """`a,b` o `[a,b]`."""
    body = text.strip()
    offset = 0
    if body.startswith("[") and body.endswith("]"):
        body, offset = body[1:-1], 1
    values = _numbers(body, offset, text)
    if len(values) != 2:
        raise GrammarError(text, offset, ["a,b"])
    return values[0], values[1]


def _bracketed(text: str) -> list[float]:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise GrammarError(text, 0, ["[número,...]"])
    inner = body[1:-1].strip()
    return _numbers(inner, 1, text) if inner else []


# --- Archivo de problema ---


def parse_problem_text(text: str, source: str = "<problema>") -> CauchyProblem:
    """
    Interpreta un problema de Cauchy en formato clave=valor.

    Raises:
        ProblemFileError: Claves faltantes, repetidas o desconocidas
        GrammarError: Valores mal escritos
    """
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ProblemFileError(f"{source}:{lineno}: se esperaba clave=valor")
        if key not in PROBLEM_KEYS:
            raise ProblemFileError(f"{source}:{lineno}: clave desconocida {key!r}")
        if key in entries:
            raise ProblemFileError(f"{source}:{lineno}: clave repetida {key!r}")
        entries[key] = value.strip()

    missing = [k for k in PROBLEM_KEYS if k not in entries and k != "beta"]
    if missing:
        raise ProblemFileError(f"{source}: faltan las claves {', '.join(missing)}")

    a, b = parse_interval(entries["interval"])
    rhs = compile_expression(entries["rhs"], ("t", "u"))
    return CauchyProblem(
        kernel=parse_kernel_spec(entries["kernel"]),
        alpha=_scalar(entries["alpha"]),
        beta=_scalar(entries.get("beta", "0")),
        gamma=_scalar(entries["gamma"]),
        a=a,
        b=b,
        constants=tuple(_bracketed(entries["constants"])),
        rhs=rhs,
        lipschitz=_scalar(entries["lipschitz"]),
    )


def parse_problem_file(path: Union[str, Path]) -> CauchyProblem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ProblemFileError(f"no se pudo leer {path}: {str(e)}") from e
    return parse_problem_text(text, str(path))


def _scalar(text: str) -> float:
    values = _numbers(text.strip(), 0, text)
    if len(values) != 1:
        raise GrammarError(text, 0, ["un único número"])
    return values[0]
