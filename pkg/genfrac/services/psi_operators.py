"""
Operadores respecto de una función ψ estrictamente creciente:

    ᴬ_ψI^{α,β}f(t) = ∫_a^t ψ′(τ)(ψ(t)−ψ(τ))^{α−1}A((ψ(t)−ψ(τ))^β)f(τ)dτ.

Con u = ψ(τ) el operador es ᴬI^{α,β} aplicado a f∘ψ^{−1} en la variable u.
La ruta por defecto remuestrea f en una malla uniforme de u con interpolación
cúbica monótona (PCHIP), aplica el operador base y vuelve a los nodos ψ(t_j).
La ruta nodal integra directamente sobre los nodos no uniformes ψ(t_j).
"""

import logging
from typing import Literal, Optional, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.interpolate import PchipInterpolator

from genfrac.core.errors import (
    ArityError,
    DomainError,
    InvalidPsiError,
    UnsupportedBasePointError,
)
from genfrac.core.special import gamma_ratio, gen_binomial, rgamma
from genfrac.models.functions import PsiFunction, SampledFunction
from genfrac.models.kernel import TruncationPolicy
from genfrac.models.operators import GenOperator
from genfrac.services import kernel_algebra
from genfrac.services.calculus_rules import leibniz_series
from genfrac.services.operator_eval import (
    check_radius,
    check_same_interval,
    integral_direct,
    integral_series,
    kernel_operator,
    rl_series_sum,
)

logger = logging.getLogger(__name__)

Method = Literal["resample", "nodal"]
Engine = Literal["direct", "series"]


def validate_psi(psi: PsiFunction, f: SampledFunction) -> NDArray[np.float64]:
    """
    Comprueba ψ en los nodos de f y devuelve ψ(t_j).

    Raises:
        DomainError: a ≤ 0 para log, a < 0 para las variantes potencia
        InvalidPsiError: ψ no finita, ψ′ no finita o no positiva, ψ no creciente
    """
    if psi.variant == "log" and not f.a > 0:
        raise DomainError(f"ψ = log t requiere a > 0, se obtuvo a = {f.a:g}")
    if psi.variant in ("power", "power_shifted") and f.a < 0:
        raise DomainError(f"ψ = t^{psi.exponent:g} requiere a ≥ 0, se obtuvo a = {f.a:g}")

    t = f.t
    values = psi.value(t)
    if not np.all(np.isfinite(values)):
        raise InvalidPsiError("ψ toma valores no finitos en la malla")

    # ψ′ puede no ser finita en t = 0 para las potencias
    inner = t > 0 if psi.variant in ("power", "power_shifted") else np.ones_like(t, dtype=bool)
    slope = psi.derivative(t[inner])
    if not np.all(np.isfinite(slope)):
        raise InvalidPsiError("ψ′ no es finita en algún nodo")
    if not np.all(slope > 0):
        raise InvalidPsiError("ψ′ debe ser positiva en todos los nodos")
    if not np.all(np.diff(values) > 0):
        raise InvalidPsiError("ψ debe ser estrictamente creciente en la malla")
    return values


# --- Cambio de variable ---


def _to_psi_grid(f: SampledFunction, u_nodes: NDArray[np.float64]) -> SampledFunction:
    """f∘ψ^{−1} sobre la malla uniforme de [ψ(a), ψ(b)] con los mismos N."""
    u_a, u_b = float(u_nodes[0]), float(u_nodes[-1])
    uniform = u_a + np.arange(f.n + 1) * ((u_b - u_a) / f.n)
    uniform[-1] = u_b
    values = PchipInterpolator(u_nodes, f.values)(uniform)
    return SampledFunction(a=u_a, b=u_b, values=values)


def _from_psi_grid(g: SampledFunction, u_nodes: NDArray[np.float64]) -> NDArray[np.float64]:
    """Valores de g (malla uniforme en u) en los nodos ψ(t_j)."""
    return PchipInterpolator(g.t, g.values)(np.clip(u_nodes, g.a, g.b))


def psi_integral(
    op: GenOperator,
    psi: PsiFunction,
    f: SampledFunction,
    method: Method = "resample",
    engine: Engine = "direct",
) -> SampledFunction:
    """
    ᴬ_ψI^{α,β}f sobre la malla de f.

    Args:
        op: Operador base (su intervalo es el de f en la variable t)
        psi: Función ψ
        f: Muestras en [a, b]
        method: resample (PCHIP en u) o nodal (integración en los nodos ψ(t_j))
        engine: Algoritmo del operador base en la ruta resample

    Raises:
        InvalidPsiError: ψ no es creciente o ψ′ no es finita
        DomainError: Punto base incompatible con ψ o radio insuficiente
    """
    check_same_interval(op, f)
    if psi.variant == "identity":
        return integral_direct(op, f) if engine == "direct" else integral_series(op, f)
    if method == "nodal":
        return psi_integral_nodal(op, psi, f)

    u_nodes = validate_psi(psi, f)
    g = _to_psi_grid(f, u_nodes)
    op_u = op.with_interval(g.a, g.b)
    G = integral_direct(op_u, g) if engine == "direct" else integral_series(op_u, g)
    values = _from_psi_grid(G, u_nodes)
    values[0] = 0.0
    return f.with_values(values)


def psi_integral_nodal(op: GenOperator, psi: PsiFunction, f: SampledFunction) -> SampledFunction:
    """
    Integración de producto directa en los nodos no uniformes u_k = ψ(t_k).

    En [u_{k−1}, u_k] el factor A((u_j−u)^β)f se interpola linealmente y se
    integra contra (u_j−u)^{α−1} en forma cerrada.
    """
    check_same_interval(op, f)
    u = validate_psi(psi, f)
    op_u = op.with_interval(float(u[0]), float(u[-1]))
    check_radius(op_u)

    alpha, beta = op.order.alpha, op.order.beta
    out = np.zeros(f.n + 1)
    for j in range(1, f.n + 1):
        d = u[j] - u[: j + 1]
        kernel_values = kernel_algebra.eval_A(op.kernel, op.order, np.power(d, beta), op.trunc)
        p = kernel_values * f.values[: j + 1]
        far, near = d[:-1], d[1:]
        width = far - near
        pow_a = (far**alpha - near**alpha) / alpha
        pow_a1 = (far ** (alpha + 1.0) - near ** (alpha + 1.0)) / (alpha + 1.0)
        # pesos del extremo izquierdo (u_{k−1}) y derecho (u_k) de cada subintervalo
        left = (pow_a1 - near * pow_a) / width
        right = (far * pow_a - pow_a1) / width
        out[j] = float(np.dot(left, p[:-1]) + np.dot(right, p[1:]))
    return f.with_values(out)


# --- Casos clásicos ---


def hadamard_integral(alpha: float, f: SampledFunction) -> SampledFunction:
    """(1/Γ(α))∫_a^t (1/τ)(log(t/τ))^{α−1}f(τ)dτ, con a > 0."""
    kernel = kernel_algebra.make_kernel("rl")
    op = kernel_operator(kernel, alpha, 0.0, f.interval)
    return psi_integral(op, PsiFunction.log(), f)


def katugampola_integral(alpha: float, rho: float, f: SampledFunction) -> SampledFunction:
    """
    ((ρ+1)^{1−α}/Γ(α))∫_a^t τ^ρ(t^{ρ+1}−τ^{ρ+1})^{α−1}f(τ)dτ.

    ψ = t^{ρ+1} con núcleo constante A = (ρ+1)^{−α}/Γ(α).
    """
    if not rho > -1:
        raise DomainError(f"ρ debe ser mayor que −1, se obtuvo {rho:g}")
    if not alpha > 0:
        raise DomainError(f"α debe ser positivo, se obtuvo {alpha:g}")
    constant = (rho + 1.0) ** (-alpha) * float(rgamma(alpha))
    kernel = kernel_algebra.make_kernel("explicit", {"coeffs": [constant]})
    op = kernel_operator(kernel, alpha, 0.0, f.interval)
    return psi_integral(op, PsiFunction.power_shifted(rho), f)


def erdelyi_kober_integral(
    alpha: float, sigma: float, eta: float, f: SampledFunction
) -> SampledFunction:
    """
    t^{−σ(α+η)}·(σ/Γ(α))∫_0^t(t^σ−τ^σ)^{α−1}τ^{ση+σ−1}f(τ)dτ.

    Con u = τ^σ el peso queda u^η. Se separa f(0)·u^η, cuya integral da la
    constante f(0)·Γ(η+1)/Γ(α+η+1), y el resto u^η(f−f(0)) se anula en u = 0 y
    va por la integral respecto de ψ = t^σ.

    La salida excluye t = 0: la malla devuelta empieza en t_1.

    Raises:
        UnsupportedBasePointError: a ≠ 0
        DomainError: η ≤ −1 (peso u^η no integrable en 0)
    """
    if f.a != 0.0:
        raise UnsupportedBasePointError(f"Erdélyi–Kober requiere a = 0, se obtuvo {f.a:g}")
    if not eta > -1.0:
        raise DomainError(f"η = {eta:g} ≤ −1: el peso u^η no es integrable en 0")

    t = f.t
    f0 = float(f.values[0])
    rest = np.zeros_like(t)
    rest[1:] = np.power(t[1:], sigma * eta) * (f.values[1:] - f0)
    kernel = kernel_algebra.make_kernel("rl")
    op = kernel_operator(kernel, alpha, 0.0, f.interval)
    inner = psi_integral(op, PsiFunction.power(sigma), f.with_values(rest))
    head = f0 * float(gamma_ratio(eta + 1.0, alpha + eta + 1.0))
    values = head + np.power(t[1:], -sigma * (alpha + eta)) * inner.values[1:]
    return SampledFunction(a=float(t[1]), b=f.b, values=values)


# --- Regla de Leibniz en ψ ---


def psi_leibniz_series(
    op: GenOperator,
    psi: PsiFunction,
    f: SampledFunction,
    g_psi_derivs: Sequence[SampledFunction],
    M: int,
    trunc: Optional[TruncationPolicy] = None,
) -> SampledFunction:
    """
    ᴬ_ψI(f·g) ≈ Σ_{m≤M} ((1/ψ′)d/dt)^m g·Σ_n a_nΓ(βn+α)C(−α−nβ, m)·ψ-RL-I^{α+nβ+m}f.

    Las integrales ψ-RL se calculan en la malla uniforme de u = ψ(t) y se
    devuelven a los nodos con PCHIP.

    Args:
        g_psi_derivs: g, (1/ψ′)g′, ... sobre la malla de f (M+1 funciones)
    """
    if psi.variant == "identity":
        return leibniz_series(op, f, g_psi_derivs, M, trunc)

    trunc = trunc or op.trunc
    if M < 0:
        raise DomainError(f"M debe ser ≥ 0, se obtuvo {M}")
    if len(g_psi_derivs) < M + 1:
        raise ArityError(f"M = {M} requiere g y {M} ψ-derivadas; hay {len(g_psi_derivs)}")

    op = op.model_copy(update={"trunc": trunc})
    total = psi_integral(op, psi, f).values * g_psi_derivs[0].values

    u_nodes = validate_psi(psi, f)
    f_u = _to_psi_grid(f, u_nodes)
    alpha, beta = op.order.alpha, op.order.beta
    weights = kernel_algebra.gamma_weights(op.kernel, op.order, trunc.max_terms)
    degree = kernel_algebra.polynomial_degree(op.kernel)
    n_idx = np.arange(weights.size)
    for m in range(1, M + 1):
        g_m = g_psi_derivs[m].values
        if not np.any(g_m):
            continue
        binomials = np.array([gen_binomial(-alpha - n * beta, m) for n in n_idx])
        inner_u = rl_series_sum(
            f_u,
            weights * binomials,
            alpha + beta * n_idx + m,
            trunc,
            degree=degree,
            scale=float(np.max(np.abs(g_m))),
            what=f"ψ-Leibniz m={m}",
        )
        inner = _from_psi_grid(f_u.with_values(inner_u), u_nodes)
        inner[0] = 0.0
        total = total + g_m * inner
    return f.with_values(total)

