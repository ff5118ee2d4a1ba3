"""
Oráculo de Riemann–Liouville: fórmula cerrada de potencias y cuadratura por
integración de producto sobre mallas uniformes.
"""

import logging
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from genfrac.core.errors import DomainError, GridTooCoarseError
from genfrac.core.special import gamma_ratio, gammaln
from genfrac.models.functions import SampledFunction

logger = logging.getLogger(__name__)

MAX_DERIVATIVE_ORDER = 3  # m = ⌊α⌋+1 admitido en la ruta de derivadas


def rl_integral_power(alpha: float, mu: float, a: float, t: ArrayLike) -> NDArray[np.float64]:
    """Γ(μ+1)/Γ(μ+α+1)·(t−a)^{μ+α}, la integral RL de (t−a)^μ."""
    x = np.asarray(t, dtype=float) - a
    return gamma_ratio(mu + 1.0, mu + alpha + 1.0) * np.power(x, mu + alpha)


def product_weights(
    alpha: float, n: int, h: float, normalized: bool = True
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Pesos de integración de producto con interpolante lineal.

    Para p lineal a trozos en la malla,
        ∫_{t_0}^{t_j}(t_j−τ)^{α−1}p(τ)dτ = Σ_{k=1..j} conv[j−k]·p_k + first[j]·p_0.

    Con `normalized` los pesos incluyen el factor 1/Γ(α) de la integral RL.
    Las segundas diferencias de d^{α+1} se evalúan con expm1/log1p para no
    perder dígitos cuando d es grande.

    Args:
        alpha: Orden α > 0
        n: Número de subintervalos
        h: Paso de la malla
        normalized: Dividir por Γ(α)

    Returns:
        (conv, first), ambos de longitud n+1
    """
    p = alpha + 1.0
    log_scale = alpha * math.log(h) - (
        float(gammaln(alpha + 2.0)) if normalized else math.log(alpha * (alpha + 1.0))
    )

    d = np.arange(1, n + 1, dtype=float)
    with np.errstate(divide="ignore"):
        second_diff = np.expm1(p * np.log1p(1.0 / d)) + np.expm1(p * np.log1p(-1.0 / d))
        first_tail = np.expm1(p * np.log1p(-1.0 / d)) + p / d
    magnitude = np.exp(p * np.log(d) + log_scale)

    conv = np.empty(n + 1)
    conv[0] = math.exp(log_scale)
    conv[1:] = magnitude * second_diff

    first = np.zeros(n + 1)
    first[1:] = magnitude * first_tail
    return conv, first


def apply_product_weights(
    conv: NDArray[np.float64], first: NDArray[np.float64], values: NDArray[np.float64]
) -> NDArray[np.float64]:
    """g_j = Σ_{k=1..j} conv[j−k]·v_k + first[j]·v_0, con g_0 = 0."""
    n = values.size - 1
    g = np.zeros(n + 1)
    g[1:] = np.convolve(values[1:], conv[:n])[:n] + first[1:] * values[0]
    return g


def rl_integral_quad(f: SampledFunction, alpha: float) -> SampledFunction:
    """
    Integral RL de orden α por integración de producto.

    g(t_j) = (1/Γ(α))∫_a^{t_j}(t_j−τ)^{α−1}f(τ)dτ con f reemplazada por su
    interpolante lineal; g(t_0) = 0.
    """
    if not alpha > 0:
        raise DomainError(f"el orden de integración debe ser positivo, se obtuvo {alpha:g}")
    conv, first = product_weights(alpha, f.n, f.h)
    return f.with_values(apply_product_weights(conv, first, f.values))


def finite_difference(values: NDArray[np.float64], h: float, m: int) -> NDArray[np.float64]:
    """Derivada m-ésima: diferencias centrales de orden 2, laterales de orden 2 en los bordes."""
    out = np.asarray(values, dtype=float)
    for _ in range(m):
        out = np.gradient(out, h, edge_order=2)
    return out


def check_derivative_grid(f: SampledFunction, m: int) -> None:
    if m > MAX_DERIVATIVE_ORDER:
        raise DomainError(f"m = {m} > {MAX_DERIVATIVE_ORDER}: orden de derivada no admitido")
    if f.n < 2 * m + 2:
        raise GridTooCoarseError(f"N = {f.n} < 2m+2 = {2 * m + 2} para derivar con m = {m}")


def rl_derivative_quad(f: SampledFunction, alpha: float) -> SampledFunction:
    """
    Derivada RL de orden α ≥ 0: I^{m−α}f por cuadratura y luego d^m/dt^m,
    con m = ⌊α⌋+1.

    Raises:
        GridTooCoarseError: N < 2m+2
    """
    if alpha < 0:
        raise DomainError(f"el orden de derivación debe ser ≥ 0, se obtuvo {alpha:g}")
    m = math.floor(alpha) + 1
    check_derivative_grid(f, m)
    g = rl_integral_quad(f, m - alpha)
    return f.with_values(finite_difference(g.values, f.h, m))
