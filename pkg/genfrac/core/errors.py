"""Jerarquía de errores de genfrac y sus códigos de salida en la CLI."""

from typing import Optional, Sequence

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_DOMAIN = 4


class GenFracError(Exception):
    """Error base de la librería."""

    exit_code: int = EXIT_UNEXPECTED


# --- Errores de uso (gramáticas de texto) ---


class GrammarError(GenFracError):
    """Texto mal formado; informa posición y tokens esperados."""

    exit_code = EXIT_USAGE

    def __init__(self, text: str, position: int, expected: Sequence[str]):
        self.text = text
        self.position = position
        self.expected = tuple(expected)
        found = repr(text[position]) if position < len(text) else "fin de texto"
        super().__init__(
            f"posición {position} en {text!r}: se esperaba {' o '.join(self.expected)}, "
            f"se encontró {found}"
        )


class KernelSpecSyntaxError(GrammarError):
    """Especificación de núcleo (`nombre:clave=valor,...`) inválida."""


class ExpressionSyntaxError(GrammarError):
    """Expresión aritmética inválida."""


class ProblemFileError(GenFracError):
    """Archivo de problema de Cauchy incompleto o mal formado."""

    exit_code = EXIT_USAGE


# --- Errores numéricos ---


class NumericalError(GenFracError):
    exit_code = EXIT_NUMERICAL


class DivergenceError(NumericalError):
    """La serie diverge en el punto pedido."""


class OutOfRegionError(DivergenceError):
    """El símbolo no converge en ese punto; probar con Re(s) mayor."""


class TruncationError(NumericalError):
    """La cola de la serie no baja de tail_tol antes de max_terms."""

    def __init__(self, message: str, tail: Optional[float] = None):
        self.tail = tail
        if tail is not None:
            message = f"{message} (última cota de cola: {tail:.3e})"
        super().__init__(message)


class NoConvergenceError(NumericalError):
    """La iteración de punto fijo no contrae."""


class IterationLimitError(NumericalError):
    """Se agotaron las iteraciones permitidas."""

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(f"{message} (residuo: {residual:.3e})")


# --- Errores de dominio ---


class DomainError(GenFracError, ValueError):
    """Parámetros fuera del dominio admitido."""

    exit_code = EXIT_DOMAIN


class PoleError(DomainError):
    """Un parámetro cae en un polo de la función Gamma."""


class NonInvertibleKernelError(DomainError):
    """a_0·Γ(α) = 0: el núcleo no admite recíproco."""


class GridTooCoarseError(DomainError):
    """La malla no tiene nodos suficientes para las diferencias finitas."""


class ArityError(DomainError):
    """Faltan derivadas para el orden de truncamiento pedido."""


class SingularNodeError(DomainError):
    """Evaluación en un nodo donde el término inicial es singular."""


class UnsupportedBasePointError(DomainError):
    """La fórmula requiere punto base a = 0."""


class InvalidPsiError(DomainError):
    """ψ no es estrictamente creciente o su derivada no es finita."""
