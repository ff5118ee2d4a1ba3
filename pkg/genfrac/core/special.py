"""Funciones especiales compartidas: Gamma, 1/Gamma, cocientes y binomiales."""

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

__all__ = ["gamma", "rgamma", "gammaln", "gamma_ratio", "rising_over_factorial", "gen_binomial"]

gamma = special.gamma
rgamma = special.rgamma  # 1/Γ, cero en los polos
gammaln = special.gammaln


def gamma_ratio(num: ArrayLike, den: ArrayLike) -> NDArray[np.float64]:
    """
    Cociente Γ(num)/Γ(den) vía log-Gamma, sin desbordar para argumentos grandes.

    Un polo en el denominador da 0.

    Args:
        num: Argumento(s) del numerador
        den: Argumento(s) del denominador

    Returns:
        Array con el cociente elemento a elemento
    """
    num_arr, den_arr = np.broadcast_arrays(
        np.asarray(num, dtype=float), np.asarray(den, dtype=float)
    )
    with np.errstate(over="ignore", invalid="ignore"):
        sign = special.gammasgn(num_arr) * special.gammasgn(den_arr)
        out = sign * np.exp(special.gammaln(num_arr) - special.gammaln(den_arr))
    return np.where(special.rgamma(den_arr) == 0.0, 0.0, out)


def rising_over_factorial(rho: float, n: ArrayLike) -> NDArray[np.float64]:
    """Γ(ρ+n)/(Γ(ρ)·n!), los coeficientes de la serie binomial de (1−x)^{−ρ}."""
    n_arr = np.asarray(n, dtype=float)
    if np.all(n_arr < 150):
        return np.asarray(special.poch(rho, n_arr) / special.gamma(n_arr + 1.0))
    # poch y n! desbordan juntos a partir de n ~ 170
    return gamma_ratio(rho + n_arr, n_arr + 1.0) * special.rgamma(rho)


def gen_binomial(x: float, m: int) -> float:
    """
    Binomial generalizado C(x, m) para x real y m entero no negativo.

    Para x entero se usa el producto descendente x(x−1)…(x−m+1)/m!, exacto y
    nulo cuando 0 ≤ x < m; scipy.special.binom no es fiable con enteros
    negativos.
    """
    if float(x).is_integer():
        return math.prod(float(x) - j for j in range(m)) / math.factorial(m)
    return float(special.binom(x, m))
