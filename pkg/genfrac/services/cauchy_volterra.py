"""
Problema de tipo Cauchy RL-D^γ u = ᴬI^{α,β} f(t, u) con datos iniciales C_1..C_n.

Se resuelve la ecuación de Volterra equivalente

    u(t) = u₀(t) + ᴬI^{α+γ,β}_{a+} f(·, u)(t),

donde el operador de orden α+γ usa el núcleo desplazado de RL-I^γ ∘ ᴬI^{α,β}.
El intervalo se recorre en ventanas de ancho fijo en las que la iteración de
Picard es contractiva; la integral sobre las ventanas ya resueltas entra como
término de historia con los mismos pesos de integración de producto.
"""

import logging
import math
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import toeplitz

from genfrac.core.config import settings
from genfrac.core.errors import (
    DivergenceError,
    DomainError,
    NoConvergenceError,
    SingularNodeError,
)
from genfrac.core.special import rgamma
from genfrac.models.functions import SampledFunction
from genfrac.models.kernel import TruncationPolicy
from genfrac.models.operators import CauchyProblem
from genfrac.models.results import CauchySolution, WindowReport
from genfrac.services import kernel_algebra
from genfrac.services.rl_oracle import apply_product_weights, product_weights

logger = logging.getLogger(__name__)

SAFETY_FACTOR = 0.9
BISECTION_STEPS = 200


# --- Término inicial ---


def singular_at_base(p: CauchyProblem) -> bool:
    """True si algún C_k ≠ 0 acompaña a un exponente γ−k negativo."""
    return any(c != 0.0 and p.gamma - k < 0 for k, c in enumerate(p.constants, start=1))


def _u0_values(p: CauchyProblem, t: NDArray[np.float64]) -> NDArray[np.float64]:
    if np.any(t < p.a) or np.any(t > p.b):
        raise DomainError(f"los nodos deben estar en [{p.a:g}, {p.b:g}]")
    if singular_at_base(p) and np.any(t == p.a):
        raise SingularNodeError(f"u₀ es singular en t = a = {p.a:g} (γ = {p.gamma:g})")

    x = t - p.a
    total = np.zeros_like(x)
    for k, c in enumerate(p.constants, start=1):
        if c == 0.0:
            continue
        exponent = p.gamma - k
        with np.errstate(divide="ignore"):
            total = total + c * float(rgamma(exponent + 1.0)) * np.power(x, exponent)
    return total


def volterra_u0(p: CauchyProblem, nodes: ArrayLike) -> SampledFunction:
    """
    u₀(t) = Σ_{k=1..n} C_k(t−a)^{γ−k}/Γ(γ−k+1) sobre una malla uniforme.

    Raises:
        DomainError: Nodos fuera de [a, b], menos de dos o no equiespaciados
        SingularNodeError: t = a con un término singular
    """
    t = np.asarray(nodes, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise DomainError("u₀ se evalúa sobre una malla de al menos dos nodos")
    steps = np.diff(t)
    if not steps[0] > 0 or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise DomainError("los nodos de u₀ deben ser crecientes y equiespaciados")
    return SampledFunction(a=float(t[0]), b=float(t[-1]), values=_u0_values(p, t))


# --- Núcleo de la ecuación de Volterra ---


def volterra_kernel(
    p: CauchyProblem, n_intervals: int, trunc: Optional[TruncationPolicy] = None
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Pesos (conv, first) de ᴬI^{α+γ,β} sobre la malla uniforme de [a, b]
    con n_intervals subintervalos, núcleo desplazado incluido.
    """
    trunc = trunc or TruncationPolicy()
    spec, order = kernel_algebra.shifted_kernel(p.kernel, p.order, p.gamma, trunc.max_terms)
    length = p.b - p.a
    if not length**order.beta < spec.radius:
        raise DomainError(f"(b−a)^β = {length**order.beta:g} excede el radio de {p.kernel}")

    h = length / n_intervals
    distances = np.arange(n_intervals + 1) * h
    values = kernel_algebra.eval_A(spec, order, np.power(distances, order.beta), trunc)
    conv, first = product_weights(order.alpha, n_intervals, h, normalized=False)
    return conv * values, first * values


def window_constant(
    p: CauchyProblem, width: float, trunc: Optional[TruncationPolicy] = None
) -> float:
    """r = C·‖ᴬI^{α+γ,β}‖ sobre una ventana de ancho dado."""
    trunc = trunc or TruncationPolicy()
    spec, order = kernel_algebra.shifted_kernel(p.kernel, p.order, p.gamma, trunc.max_terms)
    return p.lipschitz * kernel_algebra.operator_norm_bound(spec, order, width, trunc)


def contraction_step(p: CauchyProblem, trunc: Optional[TruncationPolicy] = None) -> float:
    """
    Ancho de ventana h = 0.9·h*, con h* solución de r(h*) = 1 por bisección,
    acotado por b − a.
    """
    trunc = trunc or TruncationPolicy()
    length = p.b - p.a

    def excess(width: float) -> float:
        try:
            return window_constant(p, width, trunc) - 1.0
        except DivergenceError:
            return math.inf

    upper = length / SAFETY_FACTOR
    if excess(upper) < 0:
        return length

    lo, hi = 0.0, upper
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return min(SAFETY_FACTOR * 0.5 * (lo + hi), length)


# --- Solución por ventanas ---


def _eval_rhs(
    p: CauchyProblem, t: NDArray[np.float64], u: NDArray[np.float64]
) -> NDArray[np.float64]:
    values = np.asarray(p.rhs(t, u), dtype=float)
    return np.broadcast_to(values, t.shape).astype(float)


def solve_cauchy(
    p: CauchyProblem,
    n_per_step: int = 64,
    tol: Optional[float] = None,
    max_picard: Optional[int] = None,
    trunc: Optional[TruncationPolicy] = None,
) -> CauchySolution:
    """
    Resuelve el problema de Cauchy por ventanas de contracción.

    Args:
        p: Problema
        n_per_step: Subintervalos por ventana
        tol: Tolerancia de Picard en norma del supremo (settings.picard_tol)
        max_picard: Máximo de iteraciones por ventana (settings.max_picard)
        trunc: Truncamiento de las series de núcleo

    Returns:
        CauchySolution; si u₀ es singular en a, la malla empieza en a + h

    Raises:
        NoConvergenceError: Picard no converge en alguna ventana
    """
    trunc = trunc or TruncationPolicy()
    tol = tol if tol is not None else settings.picard_tol
    max_picard = max_picard if max_picard is not None else settings.max_picard
    if n_per_step < 3:
        raise DomainError(f"n_per_step debe ser ≥ 3, se obtuvo {n_per_step}")

    length = p.b - p.a
    step = contraction_step(p, trunc)
    n_windows = max(1, math.ceil(length / step - 1e-12))
    n = n_windows * n_per_step
    h = length / n
    t = p.a + np.arange(n + 1) * h
    t[-1] = p.b
    logger.info(
        "Cauchy: paso de contracción %.4g, %d ventanas de %d subintervalos",
        step,
        n_windows,
        n_per_step,
    )

    conv, first = volterra_kernel(p, n, trunc)
    singular = singular_at_base(p)
    start = 1 if singular else 0

    u0 = np.zeros(n + 1)
    u0[start:] = _u0_values(p, t[start:])
    u = u0.copy()
    phi = np.zeros(n + 1)
    if not singular:
        phi[0] = _eval_rhs(p, t[:1], u[:1])[0]

    local = toeplitz(conv[:n_per_step], np.zeros(n_per_step))
    r = window_constant(p, n_per_step * h, trunc)
    reports = []

    for i in range(n_windows):
        j0 = i * n_per_step
        idx = np.arange(j0 + 1, j0 + n_per_step + 1)
        t_w = t[idx]

        tied = singular and i == 0
        history = np.zeros(n_per_step)
        if j0 > 0:
            lags = idx[:, None] - np.arange(1, j0 + 1)[None, :]
            history = conv[lags] @ phi[1 : j0 + 1] + first[idx] * phi[0]
        elif not tied:
            history = first[idx] * phi[0]

        current = u0[idx].copy() if i == 0 else np.full(n_per_step, u[j0])
        diffs: list[float] = []
        for iteration in range(1, max_picard + 1):
            phi_w = _eval_rhs(p, t_w, current)
            if tied:
                history = first[idx] * phi_w[0]
            updated = u0[idx] + history + local @ phi_w
            diff = float(np.max(np.abs(updated - current)))
            current = updated
            diffs.append(diff)
            if diff < tol:
                break
        else:
            raise NoConvergenceError(
                f"Picard sin convergencia en la ventana {i} [{t[j0]:.6g}, {t_w[-1]:.6g}] "
                f"tras {max_picard} iteraciones (última diferencia {diffs[-1]:.3e}); "
                f"¿constante de Lipschitz subestimada?"
            )

        u[idx] = current
        phi[idx] = _eval_rhs(p, t_w, current)
        if tied:
            phi[0] = phi[1]
        ratios = tuple(diffs[k + 1] / diffs[k] for k in range(len(diffs) - 1) if diffs[k] > 0)
        reports.append(
            WindowReport(
                index=i,
                t_start=float(t[j0]),
                t_end=float(t_w[-1]),
                iterations=iteration,
                ratios=ratios,
                contraction_constant=r,
            )
        )
        logger.info("ventana %d: Picard en %d iteraciones", i, iteration)

    integral = apply_product_weights(conv, first, phi)
    residual = float(np.max(np.abs(u[start:] - u0[start:] - integral[start:])))
    solution = SampledFunction(a=float(t[start]), b=p.b, values=u[start:])
    return CauchySolution(solution=solution, residual=residual, step=step, windows=tuple(reports))
