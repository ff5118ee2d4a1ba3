"""
Evaluación del operador general ᴬI^{α,β} y de sus derivadas.

Dos algoritmos independientes: cuadratura directa del núcleo completo y la
fórmula en serie Σ a_nΓ(βn+α)·RL-I^{α+nβ}. La serie es el motor principal;
la cuadratura directa sirve de validación cruzada.
"""

import logging
import math
from typing import Literal, Optional

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import trapezoid

from genfrac.core.errors import DomainError, TruncationError
from genfrac.core.special import gammaln
from genfrac.models.functions import SampledFunction
from genfrac.models.kernel import KernelSpec, OrderPair, TruncationPolicy
from genfrac.models.operators import DerivOperator, GenOperator
from genfrac.services import kernel_algebra
from genfrac.services.rl_oracle import (
    apply_product_weights,
    check_derivative_grid,
    finite_difference,
    product_weights,
    rl_integral_quad,
)

logger = logging.getLogger(__name__)

Flavor = Literal["rl_type", "caputo_type"]


# --- Validaciones ---


def check_radius(op: GenOperator) -> None:
    """Condición de radio: R > (b−a)^β."""
    reach = op.length**op.order.beta
    if not reach < op.kernel.radius:
        raise DomainError(
            f"(b−a)^β = {reach:g} no es menor que el radio {op.kernel.radius:g} de {op.kernel}"
        )


def check_same_interval(op: GenOperator, f: SampledFunction) -> None:
    if not (math.isclose(op.a, f.a, abs_tol=1e-14) and math.isclose(op.b, f.b, rel_tol=1e-14)):
        raise DomainError(
            f"la malla de f cubre [{f.a:g}, {f.b:g}] y el operador [{op.a:g}, {op.b:g}]"
        )


# --- Integral: cuadratura directa ---


def integral_direct(op: GenOperator, f: SampledFunction) -> SampledFunction:
    """
    ᴬI^{α,β}f por integración de producto del núcleo completo.

    En cada subintervalo el factor A((t_j−τ)^β)f(τ) se interpola linealmente
    y se integra contra (t_j−τ)^{α−1} en forma cerrada. Como A depende solo de
    t_j − t_k, la suma es una convolución discreta.
    """
    check_same_interval(op, f)
    check_radius(op)

    n, h = f.n, f.h
    distances = np.arange(n + 1) * h
    kernel_values = kernel_algebra.eval_A(
        op.kernel, op.order, np.power(distances, op.order.beta), op.trunc
    )
    conv, first = product_weights(op.order.alpha, n, h, normalized=False)
    g = apply_product_weights(conv * kernel_values, first * kernel_values, f.values)
    return f.with_values(g)


# --- Integral: serie de integrales RL ---


def rl_series_sum(
    f: SampledFunction,
    coeffs: NDArray[np.float64],
    orders: NDArray[np.float64],
    trunc: TruncationPolicy,
    degree: Optional[int] = None,
    scale: float = 1.0,
    what: str = "serie RL",
) -> NDArray[np.float64]:
    """
    Σ_n coeffs[n]·RL-I^{orders[n]}f sobre la malla de f.

    Cota del término n: |c_n|·(b−a)^{ν_n}/Γ(ν_n+1)·max|f|·scale. Se corta con
    la misma regla que las series de núcleos (dos cotas seguidas bajo
    tail_tol, o el grado si es un polinomio).

    Raises:
        TruncationError: La cota no baja de tail_tol en max_terms términos
    """
    length = f.b - f.a
    fmax = float(np.max(np.abs(f.values))) * scale
    total = np.zeros(f.n + 1)
    if fmax == 0.0:
        return total

    last = degree if degree is not None else trunc.max_terms - 1
    if last >= coeffs.size:
        raise TruncationError(f"{what}: se necesitan {last + 1} términos, hay {coeffs.size}")

    prev_small = False
    bound = math.inf
    for n in range(last + 1):
        c = float(coeffs[n])
        if c != 0.0:
            total = total + c * rl_integral_quad(f, float(orders[n])).values
        if degree is not None:
            continue
        nu = float(orders[n])
        bound = abs(c) * math.exp(nu * math.log(length) - float(gammaln(nu + 1.0))) * fmax
        small = bound < trunc.tail_tol
        if small and prev_small:
            logger.debug("%s: %d términos", what, n + 1)
            return total
        prev_small = small

    if degree is not None:
        return total
    raise TruncationError(f"{what}: sin convergencia en {trunc.max_terms} términos", tail=bound)


def integral_series(op: GenOperator, f: SampledFunction) -> SampledFunction:
    """ᴬI^{α,β}f = Σ a_nΓ(βn+α)·RL-I^{α+nβ}f, truncada según op.trunc."""
    check_same_interval(op, f)
    check_radius(op)
    alpha, beta = op.order.alpha, op.order.beta
    weights = kernel_algebra.gamma_weights(op.kernel, op.order, op.trunc.max_terms)
    orders = alpha + beta * np.arange(weights.size)
    total = rl_series_sum(
        f,
        weights,
        orders,
        op.trunc,
        degree=kernel_algebra.polynomial_degree(op.kernel),
        what=f"ᴬI[{op.kernel}]",
    )
    return f.with_values(total)


def compose(outer: GenOperator, inner: GenOperator, f: SampledFunction) -> SampledFunction:
    """outer ∘ inner aplicado a f (ambos por la serie)."""
    return integral_series(outer, integral_series(inner, f))


def compose_with_rl(
    op: GenOperator, gamma: float, f: SampledFunction, side: Literal["left", "right"]
) -> SampledFunction:
    """RL-I^γ ∘ ᴬI^{α,β} f (left) o ᴬI^{α,β} ∘ RL-I^γ f (right)."""
    if not gamma > 0:
        raise DomainError(f"γ debe ser positivo, se obtuvo {gamma:g}")
    if side == "left":
        return rl_integral_quad(integral_series(op, f), gamma)
    if side == "right":
        return integral_series(op, rl_integral_quad(f, gamma))
    raise DomainError(f"lado desconocido: {side!r}")


# --- Normas ---


def l1_norm(f: SampledFunction) -> float:
    """Norma L¹ discreta (trapecios)."""
    return float(trapezoid(np.abs(f.values), dx=f.h))


def boundedness_ratio(op: GenOperator, f: SampledFunction) -> float:
    """‖ᴬI f‖₁ / (cota de norma·‖f‖₁); no supera 1 salvo error de cuadratura."""
    norm_f = l1_norm(f)
    if norm_f == 0.0:
        return 0.0
    bound = kernel_algebra.operator_norm_bound(op.kernel, op.order, op.length, op.trunc)
    return l1_norm(integral_series(op, f)) / (bound * norm_f)


# --- Derivadas ---


def make_derivative(base: GenOperator, flavor: Flavor = "rl_type") -> DerivOperator:
    """
    Derivada asociada a ᴬI^{α,β}: m = ⌊α⌋+1 y núcleo recíproco Ā en (m−α, β).

    Raises:
        NonInvertibleKernelError: a_0Γ(α) = 0
        DomainError: m fuera del rango admitido
    """
    m = math.floor(base.order.alpha) + 1
    recip = kernel_algebra.reciprocal_kernel(
        base.kernel, base.order, m, n_terms=base.trunc.max_terms
    )
    return DerivOperator(base=base, m=m, flavor=flavor, recip=recip)


def derivative(op: DerivOperator, f: SampledFunction) -> SampledFunction:
    """
    ᴬ_RL D f = d^m/dt^m ᴬ̄I^{m−α,β} f  (rl_type)
    ᴬ_C D f  = ᴬ̄I^{m−α,β} d^m f/dt^m  (caputo_type)
    """
    check_derivative_grid(f, op.m)
    recip_op = op.base.with_kernel(op.recip, op.recip_order)
    if op.flavor == "rl_type":
        g = integral_series(recip_op, f)
        return f.with_values(finite_difference(g.values, f.h, op.m))
    fm = f.with_values(finite_difference(f.values, f.h, op.m))
    return integral_series(recip_op, fm)


def ab_derivative(
    b_value: float,
    kappa: float,
    f: SampledFunction,
    flavor: Flavor = "rl_type",
    trunc: Optional[TruncationPolicy] = None,
) -> SampledFunction:
    """
    Derivadas de Atangana–Baleanu de orden κ ∈ (0,1) como ᴬI^{1,κ} con el
    núcleo AB: d/dt ∘ ᴬI (ABR) o ᴬI ∘ d/dt (ABC).
    """
    kernel = kernel_algebra.make_kernel("ab", {"B": b_value, "order": kappa})
    op = GenOperator(
        kernel=kernel,
        order=OrderPair(alpha=1.0, beta=kappa),
        interval=f.interval,
        trunc=trunc or TruncationPolicy(),
    )
    check_derivative_grid(f, 1)
    if flavor == "rl_type":
        return f.with_values(finite_difference(integral_series(op, f).values, f.h, 1))
    return integral_series(op, f.with_values(finite_difference(f.values, f.h, 1)))


def kernel_operator(
    kernel: KernelSpec,
    alpha: float,
    beta: float,
    interval: tuple[float, float],
    trunc: Optional[TruncationPolicy] = None,
) -> GenOperator:
    """Atajo para construir un GenOperator."""
    return GenOperator(
        kernel=kernel,
        order=OrderPair(alpha=alpha, beta=beta),
        interval=interval,
        trunc=trunc or TruncationPolicy(),
    )
