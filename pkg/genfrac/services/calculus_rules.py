"""Reglas de Leibniz y de la cadena para ᴬI^{α,β} como series dobles truncadas."""

import logging
import math
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from genfrac.core.errors import (
    ArityError,
    DomainError,
    TruncationError,
    UnsupportedBasePointError,
)
from genfrac.core.special import gen_binomial
from genfrac.models.functions import SampledFunction
from genfrac.models.kernel import TruncationPolicy
from genfrac.models.operators import GenOperator, PartitionTerm
from genfrac.services import kernel_algebra
from genfrac.services.operator_eval import (
    check_radius,
    check_same_interval,
    integral_series,
    rl_series_sum,
)

logger = logging.getLogger(__name__)

MAX_CHAIN_ORDER = 12

DerivativeFn = Callable[[int, NDArray[np.float64]], NDArray[np.float64]]


# --- Faà di Bruno ---


def _descending_partitions(m: int) -> Iterator[tuple[int, ...]]:
    """Particiones de m en orden lexicográfico decreciente, sin recursión."""
    parts = [m]
    while True:
        yield tuple(parts)
        ones = 0
        while parts and parts[-1] == 1:
            parts.pop()
            ones += 1
        if not parts:
            return
        x = parts.pop() - 1
        rest = ones + 1
        parts.append(x)
        while rest > x:
            parts.append(x)
            rest -= x
        if rest:
            parts.append(rest)


@lru_cache(maxsize=None)
def partition_terms(m: int) -> tuple[PartitionTerm, ...]:
    """Términos (r; r_1..r_m; peso) de Faà di Bruno para d^m/dt^m, con m ≥ 1."""
    if m < 1:
        raise DomainError(f"m debe ser ≥ 1, se obtuvo {m}")
    terms = []
    for parts in _descending_partitions(m):
        multiplicities = tuple(parts.count(j) for j in range(1, m + 1))
        denominator = 1
        for j, rj in enumerate(multiplicities, start=1):
            denominator *= math.factorial(rj) * math.factorial(j) ** rj
        terms.append(
            PartitionTerm(
                r=len(parts),
                multiplicities=multiplicities,
                weight=math.factorial(m) / denominator,
            )
        )
    return tuple(terms)


def faa_di_bruno(
    f_derivs_at_g: Sequence[ArrayLike], g_derivs: Sequence[ArrayLike], m: int
) -> NDArray[np.float64]:
    """
    d^m/dt^m f(g(t)) por la fórmula clásica de Faà di Bruno.

    Args:
        f_derivs_at_g: f^{(r)}(g(t)) para r = 0..m
        g_derivs: g^{(j)}(t) para j = 0..m (el índice 0 no se usa)
        m: Orden de derivación

    Returns:
        Valor (escalar o array, según las entradas)

    Raises:
        DomainError: m < 0
        ArityError: Listas más cortas que m+1
    """
    if m < 0:
        raise DomainError(f"orden de derivación negativo: {m}")
    if len(f_derivs_at_g) < m + 1 or (m > 0 and len(g_derivs) < m + 1):
        raise ArityError(f"se necesitan {m + 1} derivadas de f y de g para m = {m}")
    if m == 0:
        return np.asarray(f_derivs_at_g[0], dtype=float)

    g = [np.asarray(v, dtype=float) for v in g_derivs]
    by_r: dict[int, NDArray[np.float64]] = {}
    for term in partition_terms(m):
        product = np.asarray(term.weight)
        for j, rj in enumerate(term.multiplicities, start=1):
            if rj:
                product = product * g[j] ** rj
        by_r[term.r] = by_r.get(term.r, 0.0) + product

    total = np.asarray(0.0)
    for r in range(1, m + 1):
        total = total + np.asarray(f_derivs_at_g[r], dtype=float) * by_r[r]
    return total


# --- Regla de Leibniz ---


def leibniz_series(
    op: GenOperator,
    f: SampledFunction,
    g_derivs: Sequence[SampledFunction],
    M: int,
    trunc: Optional[TruncationPolicy] = None,
) -> SampledFunction:
    """
    ᴬI(f·g) ≈ Σ_{m=0..M} g^{(m)}·Σ_n a_nΓ(βn+α)·C(−α−nβ, m)·RL-I^{α+nβ+m}f.

    El término m = 0 es exactamente integral_series(f)·g. Los términos con
    g^{(m)} idénticamente nula se omiten.

    Raises:
        ArityError: Menos de M+1 derivadas de g
    """
    trunc = trunc or op.trunc
    if M < 0:
        raise DomainError(f"M debe ser ≥ 0, se obtuvo {M}")
    if len(g_derivs) < M + 1:
        raise ArityError(f"M = {M} requiere g y {M} derivadas; hay {len(g_derivs)} funciones")
    check_same_interval(op, f)
    check_radius(op)
    for g_m in g_derivs[: M + 1]:
        if not g_m.same_grid(f):
            raise DomainError("las derivadas de g deben estar en la malla de f")

    op = op.model_copy(update={"trunc": trunc})
    total = integral_series(op, f).values * g_derivs[0].values

    alpha, beta = op.order.alpha, op.order.beta
    weights = kernel_algebra.gamma_weights(op.kernel, op.order, trunc.max_terms)
    degree = kernel_algebra.polynomial_degree(op.kernel)
    n_idx = np.arange(weights.size)
    for m in range(1, M + 1):
        g_m = g_derivs[m].values
        if not np.any(g_m):
            continue
        binomials = np.array([gen_binomial(-alpha - n * beta, m) for n in n_idx])
        inner = rl_series_sum(
            f,
            weights * binomials,
            alpha + beta * n_idx + m,
            trunc,
            degree=degree,
            scale=float(np.max(np.abs(g_m))),
            what=f"Leibniz m={m}",
        )
        total = total + g_m * inner
    return f.with_values(total)


def sampled_derivatives(g: SampledFunction, M: int) -> list[SampledFunction]:
    """g y sus M primeras derivadas por diferencias finitas de orden 2."""
    out = [g]
    for _ in range(M):
        out.append(out[-1].with_values(np.gradient(out[-1].values, g.h, edge_order=2)))
    return out


# --- Regla de la cadena ---


def chain_series(
    op: GenOperator,
    f_derivs: DerivativeFn,
    g_derivs: DerivativeFn,
    M: int,
    trunc: Optional[TruncationPolicy] = None,
    n_intervals: int = 256,
) -> SampledFunction:
    """
    ᴬI(f∘g)(t) ≈ Σ_{m=0..M} [d^m f(g(t))/dt^m]·Σ_n a_n(−1)^m t^{α+nβ+m}/(m!(α+nβ+m)).

    Args:
        op: Operador con punto base a = 0
        f_derivs: (r, x) -> f^{(r)}(x)
        g_derivs: (j, t) -> g^{(j)}(t)
        M: Orden de truncamiento en m (≤ 12)
        trunc: Truncamiento de la serie interior en n
        n_intervals: Subintervalos de la malla de salida

    Raises:
        UnsupportedBasePointError: a ≠ 0
        TruncationError: La serie interior no converge
    """
    trunc = trunc or op.trunc
    if op.a != 0.0:
        raise UnsupportedBasePointError(f"la regla de la cadena requiere a = 0, se obtuvo {op.a:g}")
    if not 0 <= M <= MAX_CHAIN_ORDER:
        raise DomainError(f"M debe estar en [0, {MAX_CHAIN_ORDER}], se obtuvo {M}")
    check_radius(op)

    t = op.a + np.arange(n_intervals + 1) * (op.length / n_intervals)
    alpha, beta = op.order.alpha, op.order.beta
    coeffs = kernel_algebra.coefficients(op.kernel, op.order, trunc.max_terms)
    degree = kernel_algebra.polynomial_degree(op.kernel)

    g_vals = [np.asarray(g_derivs(j, t), dtype=float) for j in range(M + 1)]
    f_vals = [np.asarray(f_derivs(r, g_vals[0]), dtype=float) for r in range(M + 1)]

    total = np.zeros_like(t)
    for m in range(M + 1):
        outer = faa_di_bruno(f_vals[: m + 1], g_vals[: m + 1], m)
        if not np.any(outer):
            continue
        inner = _chain_inner(coeffs, t, alpha, beta, m, trunc, degree)
        total = total + outer * inner
    return SampledFunction(a=op.a, b=op.b, values=total)


def _chain_inner(
    coeffs: NDArray[np.float64],
    t: NDArray[np.float64],
    alpha: float,
    beta: float,
    m: int,
    trunc: TruncationPolicy,
    degree: Optional[int],
) -> NDArray[np.float64]:
    """Σ_n a_n(−1)^m t^{α+nβ+m}/(m!(α+nβ+m))."""
    sign_fact = (-1.0) ** m / math.factorial(m)
    last = degree if degree is not None else trunc.max_terms - 1
    total = np.zeros_like(t)
    prev_small = False
    mag = math.inf
    for n in range(last + 1):
        nu = alpha + n * beta + m
        term = coeffs[n] * sign_fact * np.power(t, nu) / nu
        total = total + term
        if degree is not None:
            continue
        mag = float(np.max(np.abs(term)))
        small = mag < trunc.tail_tol
        if small and prev_small:
            return total
        prev_small = small
    if degree is not None:
        return total
    raise TruncationError(f"regla de la cadena m={m}: serie interior sin convergencia", tail=mag)
