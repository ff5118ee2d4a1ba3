"""
Símbolos de Laplace y Fourier de ᴬI^{α,β} y resolución de ᴬI f + c·f = g.

Potencias complejas en rama principal (corte en el semieje real negativo).
"""

import cmath
import logging
import math
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid

from genfrac.core.config import settings
from genfrac.core.errors import (
    DivergenceError,
    DomainError,
    IterationLimitError,
    NoConvergenceError,
    OutOfRegionError,
    TruncationError,
)
from genfrac.models.functions import ClosedFormFunction, SampledFunction
from genfrac.models.kernel import KernelSpec, OrderPair, TruncationPolicy
from genfrac.models.operators import GenOperator, SymbolQuery
from genfrac.models.results import FixedPointResult, LaplaceCheck
from genfrac.services import kernel_algebra
from genfrac.services.operator_eval import check_same_interval, integral_series

logger = logging.getLogger(__name__)

HORIZON_THRESHOLD = 1e-6  # e^{−sT} admitido en la verificación de Laplace
GROWTH_STEPS = 5  # pasos de crecimiento que delatan una iteración no contractiva


def _a_gamma_anywhere(
    kernel: KernelSpec, order: OrderPair, x: complex, trunc: TruncationPolicy
) -> complex:
    """A_Γ(x) por la serie; fuera de su disco, por la forma cerrada del catálogo."""
    try:
        return complex(kernel_algebra.eval_A_gamma(kernel, order, x, trunc))
    except (DivergenceError, TruncationError) as e:
        closed = kernel_algebra.a_gamma_closed_form(kernel, order, x)
        if closed is None:
            raise OutOfRegionError(
                f"A_Γ de {kernel} no converge en x = {x:.6g}; pruebe con Re(s) mayor "
                f"({type(e).__name__}: {str(e)})"
            ) from e
        logger.debug("A_Γ(%s) por continuación analítica de %s", x, kernel)
        return closed


def _laplace_formula(
    kernel: KernelSpec, order: OrderPair, s: complex, trunc: TruncationPolicy
) -> complex:
    x = s ** (-order.beta) if order.beta != 0 else complex(1.0)
    return s ** (-order.alpha) * _a_gamma_anywhere(kernel, order, x, trunc)


def laplace_symbol(q: SymbolQuery) -> complex:
    """
    s^{−α}·A_Γ(s^{−β}).

    Raises:
        DomainError: Re(s) ≤ 0
        OutOfRegionError: A_Γ no converge en s^{−β} y no hay forma cerrada
    """
    s = complex(q.point)
    if not s.real > 0:
        raise DomainError(f"el símbolo de Laplace requiere Re(s) > 0, se obtuvo s = {s}")
    return _laplace_formula(q.kernel, q.order, s, q.trunc)


def fourier_symbol(q: SymbolQuery) -> complex:
    """
    k^{−α}e^{iαπ/2}·A_Γ(k^{−β}e^{iβπ/2}).

    Raises:
        DomainError: k no real o k = 0
    """
    k = complex(q.point)
    if k.imag != 0.0 or k.real == 0.0:
        raise DomainError(f"el símbolo de Fourier requiere k real no nulo, se obtuvo {k}")
    alpha, beta = q.order.alpha, q.order.beta
    x = k ** (-beta) * cmath.exp(1j * beta * math.pi / 2) if beta != 0 else complex(1.0)
    factor = k ** (-alpha) * cmath.exp(1j * alpha * math.pi / 2)
    return factor * _a_gamma_anywhere(q.kernel, q.order, x, q.trunc)


def branch_identity_gap(
    kernel: KernelSpec, order: OrderPair, k: float, trunc: Optional[TruncationPolicy] = None
) -> float:
    """|fourier_symbol(k) − s^{−α}A_Γ(s^{−β})| en s = −ik."""
    trunc = trunc or TruncationPolicy()
    fourier = fourier_symbol(SymbolQuery(kernel=kernel, order=order, point=k, trunc=trunc))
    laplace = _laplace_formula(kernel, order, complex(0.0, -k), trunc)
    return abs(fourier - laplace)


def laplace_numeric_check(
    op: GenOperator,
    f: ClosedFormFunction,
    s: float,
    T: float,
    n_intervals: Optional[int] = None,
) -> LaplaceCheck:
    """
    Compara ∫_0^T e^{−st}(ᴬI f)(t)dt (trapecios sobre malla densa) con
    s^{−α}A_Γ(s^{−β})·f̂(s).

    El operador se reinterpreta sobre [0, T]. Si e^{−sT} > 1e-6 el resultado
    lleva un aviso.
    """
    if not s > 0:
        raise DomainError(f"s debe ser positivo, se obtuvo {s:g}")
    if not T > 0:
        raise DomainError(f"el horizonte T debe ser positivo, se obtuvo {T:g}")
    n = n_intervals or settings.laplace_intervals

    op_T = op.with_interval(0.0, T)
    samples = f.sample(0.0, T, n)
    g = integral_series(op_T, samples)
    numeric = float(trapezoid(np.exp(-s * g.t) * g.values, dx=g.h))

    symbol = laplace_symbol(SymbolQuery(kernel=op.kernel, order=op.order, point=s, trunc=op.trunc))
    predicted = float(symbol.real) * f.laplace(s)

    warning = None
    if math.exp(-s * T) > HORIZON_THRESHOLD:
        warning = f"horizonte corto: e^(-sT) = {math.exp(-s * T):.2e} > {HORIZON_THRESHOLD:g}"
        logger.warning("⚠ %s", warning)
    return LaplaceCheck(numeric=numeric, predicted=predicted, warning=warning)


def solve_linear_integral_eq(
    op: GenOperator,
    c: float,
    g: SampledFunction,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> FixedPointResult:
    """
    Resuelve ᴬI^{α,β}f + c·f = g por la iteración f_{k+1} = (g − ᴬI f_k)/c,
    f_0 = g/c, hasta que ‖f_{k+1} − f_k‖_∞ < tol.

    Raises:
        NoConvergenceError: Las diferencias crecen durante 5 pasos seguidos
        IterationLimitError: Se agotó max_iter
    """
    if c == 0:
        raise DomainError("c debe ser no nulo")
    check_same_interval(op, g)

    bound = kernel_algebra.operator_norm_bound(op.kernel, op.order, op.length, op.trunc) / abs(c)
    if bound >= 1:
        logger.warning("⚠ cota a priori de contracción %.3g ≥ 1; se itera igualmente", bound)

    f = g.values / c
    diffs: list[float] = []
    growth = 0
    for iteration in range(1, max_iter + 1):
        f_next = (g.values - integral_series(op, g.with_values(f)).values) / c
        diff = float(np.max(np.abs(f_next - f)))
        f = f_next
        if diffs and diff > diffs[-1]:
            growth += 1
        else:
            growth = 0
        diffs.append(diff)

        if diff < tol:
            solution = g.with_values(f)
            residual = _residual(op, c, g, solution)
            logger.info("✓ punto fijo en %d iteraciones (residuo %.2e)", iteration, residual)
            return FixedPointResult(
                solution=solution,
                residual=residual,
                iterations=iteration,
                diff_norms=tuple(diffs),
                ratio_bound=bound,
            )
        if growth >= GROWTH_STEPS:
            raise NoConvergenceError(
                f"la iteración no contrae: diferencias crecientes durante {GROWTH_STEPS} pasos "
                f"(última {diff:.3e})"
            )

    raise IterationLimitError(
        f"sin convergencia en {max_iter} iteraciones", _residual(op, c, g, g.with_values(f))
    )


def _residual(op: GenOperator, c: float, g: SampledFunction, f: SampledFunction) -> float:
    return float(np.max(np.abs(integral_series(op, f).values + c * f.values - g.values)))
