"""
Álgebra de núcleos analíticos.

Un núcleo es la serie A(x) = Σ a_n(α, β) xⁿ. Este módulo construye los núcleos
del catálogo, evalúa A y su transformada A_Γ(x) = Σ a_nΓ(βn+α)xⁿ, y calcula el
núcleo recíproco con el que se definen las derivadas.
"""

import logging
import math
from functools import lru_cache
from typing import Any, Mapping, Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from genfrac.core.errors import (
    DivergenceError,
    DomainError,
    NonInvertibleKernelError,
    PoleError,
    TruncationError,
)
from genfrac.core.special import gamma, gamma_ratio, rgamma, rising_over_factorial
from genfrac.models.kernel import CatalogId, KernelSpec, OrderPair, TruncationPolicy

logger = logging.getLogger(__name__)

Scalar = Union[float, complex]

DIVERGENCE_WINDOW = 8  # términos consecutivos estrictamente crecientes
ORDER_MATCH_TOL = 1e-12

# Parámetros de cada entrada del catálogo: nombre -> valor por defecto (None = obligatorio)
_CATALOG_PARAMS: dict[str, dict[str, Optional[float]]] = {
    "rl": {"linear": 0.0},
    "prabhakar": {"rho": None, "omega": None},
    "ab": {"B": 1.0},
    "gpf": {"rho": None},
    "ml": {"beta_ml": None, "alpha_ml": None, "rho": 1.0},
}
_OPTIONAL_PARAMS: dict[str, tuple[str, ...]] = {"ab": ("order",)}

CATALOG: dict[str, str] = {
    "rl": "A(x) = 1/Γ(α) (Riemann–Liouville); linear=1 da A(x) = x/Γ(α+β)",
    "prabhakar": "A(x) = E^ρ_{β,α}(ωx); parámetros rho, omega",
    "ab": "A(x) = B/(1−κ)·E_κ(−κx/(1−κ)), usado como ᴬI^{1,κ}; parámetros B (1), order κ (β)",
    "gpf": "A(x) = exp((ρ−1)x/ρ)/(ρ^α Γ(α)), usado con β = 1; parámetro rho ∈ (0,1]",
    "ml": "A(x) = E^ρ_{β_ml,α_ml}(x); parámetros beta_ml, alpha_ml, rho (1)",
    "explicit": "lista finita de coeficientes; parámetros coeffs=[...], radius (∞)",
}


# --- Construcción ---


def make_kernel(
    catalog_id: CatalogId, params: Optional[Mapping[str, Any]] = None
) -> KernelSpec:
    """
    Construye un núcleo del catálogo.

    Args:
        catalog_id: rl, prabhakar, ab, gpf, ml o explicit
        params: Parámetros del núcleo (ver CATALOG)

    Returns:
        KernelSpec validado

    Raises:
        DomainError: Parámetro desconocido, faltante o fuera de dominio
        PoleError: ρ entero no positivo en prabhakar/ml
    """
    given = dict(params or {})

    if catalog_id == "explicit":
        return _make_explicit(given)

    if catalog_id not in _CATALOG_PARAMS:
        raise DomainError(f"núcleo desconocido: {catalog_id!r}")

    signature = _CATALOG_PARAMS[catalog_id]
    optional = _OPTIONAL_PARAMS.get(catalog_id, ())
    unknown = set(given) - set(signature) - set(optional)
    if unknown:
        raise DomainError(f"parámetros desconocidos para {catalog_id}: {sorted(unknown)}")

    values: dict[str, float] = {}
    for name, default in signature.items():
        if name in given:
            values[name] = _as_finite(catalog_id, name, given[name])
        elif default is None:
            raise DomainError(f"el núcleo {catalog_id} necesita el parámetro {name}")
        else:
            values[name] = default
    for name in optional:
        if name in given:
            values[name] = _as_finite(catalog_id, name, given[name])

    _validate_catalog(catalog_id, values)

    label = catalog_id
    if given:
        label += ":" + ",".join(f"{k}={values[k]:g}" for k in sorted(given))
    return KernelSpec(catalog_id=catalog_id, params=tuple(sorted(values.items())), label=label)


def _make_explicit(given: dict[str, Any]) -> KernelSpec:
    unknown = set(given) - {"coeffs", "radius"}
    if unknown:
        raise DomainError(f"parámetros desconocidos para explicit: {sorted(unknown)}")
    if "coeffs" not in given:
        raise DomainError("el núcleo explicit necesita coeffs=[...]")
    coeffs = tuple(float(c) for c in given["coeffs"])
    radius = float(given.get("radius", math.inf))
    if not coeffs or not all(math.isfinite(c) for c in coeffs):
        raise DomainError("coeffs debe ser una lista no vacía de reales finitos")
    if not radius > 0:
        raise DomainError(f"el radio debe ser positivo, se obtuvo {radius}")
    label = f"explicit:coeffs=[{','.join(f'{c:g}' for c in coeffs)}]"
    if math.isfinite(radius):
        label += f",radius={radius:g}"
    return KernelSpec(catalog_id="explicit", coeffs=coeffs, radius=radius, label=label)


def _as_finite(catalog_id: str, name: str, value: Any) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError) as e:
        raise DomainError(f"{catalog_id}.{name} debe ser real: {str(e)}") from e
    if not math.isfinite(x):
        raise DomainError(f"{catalog_id}.{name} debe ser finito")
    return x


def _validate_catalog(catalog_id: str, values: dict[str, float]) -> None:
    if catalog_id in ("prabhakar", "ml"):
        rho = values["rho"]
        if rho <= 0 and float(rho).is_integer():
            raise PoleError(f"ρ = {rho:g} es un polo de Γ(ρ)")
    elif catalog_id == "ab" and "order" in values:
        _check_ab_order(values["order"])
    elif catalog_id == "gpf" and not 0 < values["rho"] <= 1:
        raise DomainError(f"el núcleo gpf requiere ρ ∈ (0, 1], se obtuvo {values['rho']:g}")
    elif catalog_id == "rl" and values["linear"] not in (0.0, 1.0):
        raise DomainError("rl.linear debe ser 0 o 1")


def _check_ab_order(kappa: float) -> float:
    if not 0 < kappa < 1:
        raise DomainError(f"el núcleo AB requiere orden κ ∈ (0, 1), se obtuvo {kappa:g}")
    return kappa


def _ab_constants(kernel: KernelSpec, beta: float) -> tuple[float, float, float]:
    """(B/(1−κ), −κ/(1−κ), κ) del núcleo AB; κ por defecto es β."""
    kappa = _check_ab_order(kernel.param("order", beta))  # type: ignore[arg-type]
    b_value = kernel.param("B", 1.0) or 0.0
    return b_value / (1.0 - kappa), -kappa / (1.0 - kappa), kappa


# --- Coeficientes ---


def _check_stored_terms(kernel: KernelSpec, n_terms: int) -> None:
    stored = len(kernel.coeffs or ())
    if kernel.truncated and n_terms > stored:
        raise TruncationError(
            f"{kernel}: serie truncada en {stored} términos, se piden {n_terms}"
        )


def coefficients(kernel: KernelSpec, order: OrderPair, n_terms: int) -> NDArray[np.float64]:
    """Coeficientes a_0..a_{n−1} de A en los órdenes dados (array de solo lectura)."""
    _check_stored_terms(kernel, n_terms)
    return _coefficient_table(kernel, order.alpha, order.beta, n_terms)


def gamma_weights(kernel: KernelSpec, order: OrderPair, n_terms: int) -> NDArray[np.float64]:
    """Pesos a_nΓ(βn+α), coeficientes de A_Γ (array de solo lectura)."""
    _check_stored_terms(kernel, n_terms)
    return _gamma_weight_table(kernel, order.alpha, order.beta, n_terms)


@lru_cache(maxsize=1024)
def _coefficient_table(
    kernel: KernelSpec, alpha: float, beta: float, n_terms: int
) -> NDArray[np.float64]:
    n = np.arange(n_terms, dtype=float)
    cid = kernel.catalog_id

    if cid == "rl":
        out = np.zeros(n_terms)
        if kernel.param("linear"):
            if n_terms > 1:
                out[1] = rgamma(alpha + beta)
        else:
            out[0] = rgamma(alpha)
    elif cid == "prabhakar":
        rho, omega = kernel.param("rho"), kernel.param("omega")
        out = rising_over_factorial(rho, n) * np.power(omega, n) * rgamma(beta * n + alpha)
    elif cid == "ab":
        scale, lam, kappa = _ab_constants(kernel, beta)
        out = scale * np.power(lam, n) * rgamma(kappa * n + 1.0)
    elif cid == "gpf":
        rho = kernel.param("rho")
        c = (rho - 1.0) / rho
        out = np.power(c, n) * rgamma(n + 1.0) * rho ** (-alpha) * rgamma(alpha)
    elif cid == "ml":
        rho = kernel.param("rho")
        beta_ml, alpha_ml = kernel.param("beta_ml"), kernel.param("alpha_ml")
        out = rising_over_factorial(rho, n) * rgamma(beta_ml * n + alpha_ml)
    else:
        out = _padded(kernel.coeffs or (), n_terms)

    out = np.asarray(out, dtype=float)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=1024)
def _gamma_weight_table(
    kernel: KernelSpec, alpha: float, beta: float, n_terms: int
) -> NDArray[np.float64]:
    n = np.arange(n_terms, dtype=float)
    cid = kernel.catalog_id

    if cid == "rl":
        out = np.zeros(n_terms)
        index = 1 if kernel.param("linear") else 0
        if index < n_terms:
            out[index] = 1.0
    elif cid == "prabhakar":
        # Los pesos de Prabhakar no dependen de (α, β): A_Γ(x) = (1−ωx)^{−ρ}
        rho, omega = kernel.param("rho"), kernel.param("omega")
        out = rising_over_factorial(rho, n) * np.power(omega, n)
    elif cid == "ab":
        scale, lam, kappa = _ab_constants(kernel, beta)
        out = scale * np.power(lam, n) * gamma_ratio(beta * n + alpha, kappa * n + 1.0)
    elif cid == "gpf":
        rho = kernel.param("rho")
        c = (rho - 1.0) / rho
        out = (
            np.power(c, n)
            * rho ** (-alpha)
            * rgamma(alpha)
            * gamma_ratio(beta * n + alpha, n + 1.0)
        )
    elif cid == "ml":
        rho = kernel.param("rho")
        beta_ml, alpha_ml = kernel.param("beta_ml"), kernel.param("alpha_ml")
        out = rising_over_factorial(rho, n) * gamma_ratio(
            beta * n + alpha, beta_ml * n + alpha_ml
        )
    elif kernel.gamma_coeffs is not None and _matches(kernel.bound_order, alpha, beta):
        out = _padded(kernel.gamma_coeffs, n_terms)
    else:
        out = _padded(kernel.coeffs or (), n_terms) * gamma(beta * n + alpha)

    out = np.asarray(out, dtype=float)
    out.flags.writeable = False
    return out


def _padded(values: Sequence[float], n_terms: int) -> NDArray[np.float64]:
    out = np.zeros(n_terms)
    k = min(len(values), n_terms)
    out[:k] = values[:k]
    return out


def _matches(bound: Optional[tuple[float, float]], alpha: float, beta: float) -> bool:
    return bound is not None and (
        math.isclose(bound[0], alpha, rel_tol=ORDER_MATCH_TOL, abs_tol=ORDER_MATCH_TOL)
        and math.isclose(bound[1], beta, rel_tol=ORDER_MATCH_TOL, abs_tol=ORDER_MATCH_TOL)
    )


def polynomial_degree(kernel: KernelSpec) -> Optional[int]:
    """Grado de A si el núcleo es un polinomio conocido; None para series infinitas."""
    cid = kernel.catalog_id
    if kernel.truncated:
        return None
    if cid == "rl":
        return 1 if kernel.param("linear") else 0
    if cid == "gpf" and kernel.param("rho") == 1.0:
        return 0
    if cid == "prabhakar" and kernel.param("omega") == 0.0:
        return 0
    if cid == "explicit":
        support = [i for i, c in enumerate(kernel.coeffs or ()) if c != 0.0]
        if kernel.gamma_coeffs is not None:
            support += [i for i, c in enumerate(kernel.gamma_coeffs) if c != 0.0]
        return max(support, default=0)
    return None


# --- Suma de series ---


def _sum_power_series(
    weights: NDArray[np.float64],
    x: ArrayLike,
    trunc: TruncationPolicy,
    degree: Optional[int],
    what: str,
    detect_divergence: bool = False,
) -> NDArray[Any]:
    """
    Σ weights[n]·xⁿ con la regla de truncamiento común.

    Un polinomio conocido se suma completo. Una serie infinita se corta en el
    primer N con dos términos consecutivos por debajo de tail_tol.
    """
    x_arr = np.asarray(x)
    dtype = np.result_type(x_arr.dtype, np.float64)
    total = np.zeros(x_arr.shape, dtype=dtype)
    power = np.ones(x_arr.shape, dtype=dtype)

    if degree is not None and degree >= trunc.max_terms:
        raise TruncationError(
            f"{what}: el polinomio tiene grado {degree} ≥ max_terms = {trunc.max_terms}"
        )
    last = degree if degree is not None else trunc.max_terms - 1

    prev_small = False
    prev_mag = math.inf
    run = 0
    mag = math.inf
    for n in range(last + 1):
        term = weights[n] * power
        total = total + term
        power = power * x_arr
        if degree is not None:
            continue

        mag = float(np.max(np.abs(term))) if term.size else 0.0
        small = mag < trunc.tail_tol
        if small and prev_small:
            logger.debug("%s: serie truncada en N = %d", what, n)
            return total
        prev_small = small

        if detect_divergence:
            run = run + 1 if mag > prev_mag else 1
            if run >= DIVERGENCE_WINDOW:
                raise DivergenceError(
                    f"{what}: {DIVERGENCE_WINDOW} términos crecientes consecutivos hasta n = {n}"
                )
        prev_mag = mag

    if degree is not None:
        return total
    raise TruncationError(f"{what}: sin convergencia en {trunc.max_terms} términos", tail=mag)


def _unwrap(value: NDArray[Any], like: ArrayLike) -> Any:
    return value.item() if np.ndim(like) == 0 else value


def eval_A(
    kernel: KernelSpec, order: OrderPair, x: ArrayLike, trunc: Optional[TruncationPolicy] = None
) -> Any:
    """
    Evalúa A(x) = Σ a_n xⁿ (escalar o array, real o complejo).

    Raises:
        DivergenceError: |x| ≥ radio del núcleo
        TruncationError: La serie no converge en max_terms términos
    """
    trunc = trunc or TruncationPolicy()
    reach = float(np.max(np.abs(x))) if np.size(x) else 0.0
    if reach >= kernel.radius:
        raise DivergenceError(f"|x| = {reach:g} ≥ radio {kernel.radius:g} del núcleo {kernel}")
    weights = coefficients(kernel, order, trunc.max_terms)
    total = _sum_power_series(weights, x, trunc, polynomial_degree(kernel), f"A[{kernel}]")
    return _unwrap(total, x)


def eval_A_gamma(
    kernel: KernelSpec, order: OrderPair, x: ArrayLike, trunc: Optional[TruncationPolicy] = None
) -> Any:
    """
    Evalúa A_Γ(x) = Σ a_nΓ(βn+α)xⁿ por suma directa.

    Raises:
        DivergenceError: 8 términos consecutivos de módulo creciente
        TruncationError: La serie no converge en max_terms términos
    """
    trunc = trunc or TruncationPolicy()
    weights = gamma_weights(kernel, order, trunc.max_terms)
    total = _sum_power_series(
        weights,
        x,
        trunc,
        polynomial_degree(kernel),
        f"A_Γ[{kernel}]",
        detect_divergence=True,
    )
    return _unwrap(total, x)


def a_gamma_closed_form(kernel: KernelSpec, order: OrderPair, x: Scalar) -> Optional[complex]:
    """
    Continuación analítica de A_Γ cuando el catálogo la conoce; None si no.

    Rama principal para las potencias complejas.
    """
    alpha, beta = order.alpha, order.beta
    z = complex(x)
    cid = kernel.catalog_id

    if cid == "rl":
        return z if kernel.param("linear") else complex(1.0)
    if cid == "prabhakar":
        return complex((1.0 - kernel.param("omega") * z) ** (-kernel.param("rho")))
    if cid == "ml" and _matches((kernel.param("alpha_ml"), kernel.param("beta_ml")), alpha, beta):
        return complex((1.0 - z) ** (-kernel.param("rho")))
    if cid == "ab" and math.isclose(alpha, 1.0):
        scale, lam, kappa = _ab_constants(kernel, beta)
        if math.isclose(beta, kappa):
            return complex(scale / (1.0 - lam * z))
    if cid == "gpf" and beta == 1.0:
        rho = kernel.param("rho")
        return complex(rho ** (-alpha) * (1.0 - (rho - 1.0) / rho * z) ** (-alpha))
    return None


# --- Cotas ---


def sup_abs_A(
    kernel: KernelSpec, order: OrderPair, r: float, trunc: Optional[TruncationPolicy] = None
) -> float:
    """Mayorante Σ|a_n|rⁿ ≥ sup_{|x|≤r}|A(x)|."""
    trunc = trunc or TruncationPolicy()
    if r >= kernel.radius:
        raise DivergenceError(f"r = {r:g} ≥ radio {kernel.radius:g} del núcleo {kernel}")
    weights = np.abs(coefficients(kernel, order, trunc.max_terms))
    total = _sum_power_series(weights, r, trunc, polynomial_degree(kernel), f"|A|[{kernel}]")
    return float(total)


def operator_norm_bound(
    kernel: KernelSpec,
    order: OrderPair,
    length: float,
    trunc: Optional[TruncationPolicy] = None,
) -> float:
    """
    Cota de la norma de ᴬI^{α,β} en L¹ y en L^∞ sobre un intervalo de longitud L.

    ∫_0^L u^{α−1}|A(u^β)|du ≤ L^α·sup_{|x|≤L^β}|A(x)|/α.
    """
    alpha, beta = order.alpha, order.beta
    sup = sup_abs_A(kernel, order, length**beta, trunc)
    return length**alpha * sup / alpha


# --- Recíprocos, semigrupo y desplazamientos ---


def reciprocal_kernel(
    kernel: KernelSpec, order: OrderPair, m: int, n_terms: Optional[int] = None
) -> KernelSpec:
    """
    Núcleo Ā con Ā_Γ·A_Γ = 1, para usar en los órdenes (m−α, β).

    Los pesos r_k = ā_kΓ(βk+m−α) son el recíproco formal de A_Γ:
    r_0 = 1/(a_0Γ(α)) y r_k = −r_0·Σ_{j=1..k} a_jΓ(βj+α)·r_{k−j}.

    Raises:
        NonInvertibleKernelError: a_0Γ(α) = 0
        DomainError: m − α ≤ 0
    """
    n_terms = n_terms or TruncationPolicy().max_terms
    alpha_bar = m - order.alpha
    if alpha_bar <= 0:
        raise DomainError(f"m − α = {alpha_bar:g} ≤ 0")

    w = gamma_weights(kernel, order, n_terms)
    if w[0] == 0.0:
        raise NonInvertibleKernelError(f"a_0·Γ(α) = 0 para {kernel}: no hay núcleo recíproco")

    r = np.zeros(n_terms)
    r[0] = 1.0 / w[0]
    for k in range(1, n_terms):
        r[k] = -r[0] * np.dot(w[1 : k + 1], r[k - 1 :: -1])

    k_idx = np.arange(n_terms, dtype=float)
    abar = r * rgamma(order.beta * k_idx + alpha_bar)
    return KernelSpec(
        catalog_id="explicit",
        coeffs=tuple(float(c) for c in abar),
        gamma_coeffs=tuple(float(c) for c in r),
        bound_order=(alpha_bar, order.beta),
        truncated=polynomial_degree(kernel) != 0,
        label=f"recip({kernel}; m={m})",
    )


def reciprocal_identity_residuals(
    kernel: KernelSpec,
    order: OrderPair,
    m: int,
    k_max: int,
    recip: Optional[KernelSpec] = None,
) -> list[float]:
    """|Σ_{i+j=k} ā_iΓ(βi+m−α)·a_jΓ(βj+α) − δ_{k0}| para k = 0..k_max."""
    recip = recip or reciprocal_kernel(kernel, order, m, n_terms=k_max + 1)
    assert recip.bound_order is not None
    w = gamma_weights(kernel, order, k_max + 1)
    r = np.asarray(_padded(recip.gamma_coeffs or (), k_max + 1))
    conv = np.convolve(r, w)[: k_max + 1]
    conv[0] -= 1.0
    return [float(v) for v in np.abs(conv)]


def semigroup_residual(
    kernel: KernelSpec, alpha1: float, alpha2: float, beta: float, k_max: int
) -> list[float]:
    """
    Residuos de la condición de semigrupo en α para k = 0..k_max:

    |Σ_{m+n=k} a_n(α₁)a_m(α₂)Γ(βn+α₁)Γ(βm+α₂) − a_k(α₁+α₂)Γ(βk+α₁+α₂)|.
    """
    n_terms = k_max + 1
    w1 = gamma_weights(kernel, OrderPair(alpha=alpha1, beta=beta), n_terms)
    w2 = gamma_weights(kernel, OrderPair(alpha=alpha2, beta=beta), n_terms)
    w12 = gamma_weights(kernel, OrderPair(alpha=alpha1 + alpha2, beta=beta), n_terms)
    conv = np.convolve(w1, w2)[:n_terms]
    return [float(v) for v in np.abs(conv - w12)]


def shifted_kernel(
    kernel: KernelSpec, order: OrderPair, gamma_order: float, n_terms: Optional[int] = None
) -> tuple[KernelSpec, OrderPair]:
    """
    Núcleo de RL-I^γ ∘ ᴬI^{α,β} visto como operador de orden (α+γ, β).

    Sus pesos A_Γ son los de A en (α, β); los coeficientes se redividen por
    Γ(βn+α+γ).
    """
    n_terms = n_terms or TruncationPolicy().max_terms
    w = gamma_weights(kernel, order, n_terms)
    shifted = OrderPair(alpha=order.alpha + gamma_order, beta=order.beta)
    n = np.arange(n_terms, dtype=float)
    coeffs = w * rgamma(order.beta * n + shifted.alpha)
    spec = KernelSpec(
        catalog_id="explicit",
        coeffs=tuple(float(c) for c in coeffs),
        gamma_coeffs=tuple(float(c) for c in w),
        bound_order=(shifted.alpha, shifted.beta),
        radius=kernel.radius,
        truncated=polynomial_degree(kernel) is None,
        label=f"shift({kernel}; γ={gamma_order:g})",
    )
    return spec, shifted
