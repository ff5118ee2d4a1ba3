"""Funciones muestreadas, funciones de forma cerrada y funciones ψ."""

import math
from typing import Any, Callable, Literal, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import special

ArrayFn = Callable[[NDArray[np.float64]], NDArray[np.float64]]


class SampledFunction(BaseModel):
    """Función sobre la malla uniforme t_i = a + i·(b−a)/N, i = 0..N."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: float = Field(allow_inf_nan=False)
    b: float = Field(allow_inf_nan=False)
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _as_readonly_array(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=float)
        if arr.ndim != 1 or arr.size < 3:
            raise ValueError("se necesitan al menos N+1 = 3 valores en un vector")
        if not np.all(np.isfinite(arr)):
            raise ValueError("todos los valores deben ser finitos")
        arr.flags.writeable = False
        return arr

    @model_validator(mode="after")
    def _check_interval(self) -> "SampledFunction":
        if not self.b > self.a:
            raise ValueError(f"intervalo vacío: [{self.a}, {self.b}]")
        return self

    @property
    def n(self) -> int:
        """Número de subintervalos N."""
        return int(self.values.size - 1)

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n

    @property
    def t(self) -> NDArray[np.float64]:
        return self.a + np.arange(self.n + 1) * ((self.b - self.a) / self.n)

    @property
    def interval(self) -> tuple[float, float]:
        return (self.a, self.b)

    @classmethod
    def from_callable(cls, fn: ArrayFn, a: float, b: float, n: int) -> "SampledFunction":
        """Muestrea `fn` (vectorizada sobre numpy) en N = n subintervalos de [a, b]."""
        t = a + np.arange(n + 1) * ((b - a) / n)
        return cls(a=a, b=b, values=np.broadcast_to(fn(t), t.shape))

    def with_values(self, values: ArrayLike) -> "SampledFunction":
        """Misma malla, otros valores."""
        return SampledFunction(a=self.a, b=self.b, values=values)

    def same_grid(self, other: "SampledFunction") -> bool:
        return self.n == other.n and self.a == other.a and self.b == other.b


class ClosedFormFunction(BaseModel):
    """
    Funciones con integral RL y transformada de Laplace conocidas.

    Todas se expresan respecto del punto de referencia a: (t−a)^μ, e^{k(t−a)},
    Σ c_i (t−a)^i y la constante c.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["power", "exponential", "polynomial", "constant"]
    mu: float = 0.0
    k: float = 0.0
    coeffs: tuple[float, ...] = ()
    c: float = 0.0
    a: float = 0.0

    @model_validator(mode="after")
    def _check_exponent(self) -> "ClosedFormFunction":
        if self.kind == "power" and not self.mu > -1:
            raise ValueError(f"exponente μ = {self.mu} no integrable (se requiere μ > −1)")
        if self.kind == "polynomial" and not self.coeffs:
            raise ValueError("un polinomio necesita coeficientes")
        return self

    @classmethod
    def power(cls, mu: float, a: float = 0.0) -> "ClosedFormFunction":
        return cls(kind="power", mu=mu, a=a)

    @classmethod
    def exponential(cls, k: float, a: float = 0.0) -> "ClosedFormFunction":
        return cls(kind="exponential", k=k, a=a)

    @classmethod
    def polynomial(cls, coeffs: tuple[float, ...], a: float = 0.0) -> "ClosedFormFunction":
        return cls(kind="polynomial", coeffs=tuple(coeffs), a=a)

    @classmethod
    def constant(cls, c: float) -> "ClosedFormFunction":
        return cls(kind="constant", c=c)

    def __call__(self, t: ArrayLike) -> NDArray[np.float64]:
        return self.derivative(0, t)

    def derivative(self, order: int, t: ArrayLike) -> NDArray[np.float64]:
        """Derivada clásica de orden `order` evaluada en t."""
        x = np.asarray(t, dtype=float) - self.a
        if self.kind == "constant":
            return np.full_like(x, self.c if order == 0 else 0.0)
        if self.kind == "exponential":
            return self.k**order * np.exp(self.k * x)
        if self.kind == "polynomial":
            coeffs = np.polynomial.polynomial.polyder(np.asarray(self.coeffs), order)
            return np.polynomial.polynomial.polyval(x, coeffs) + np.zeros_like(x)
        # Potencia: μ(μ−1)···(μ−r+1)(t−a)^{μ−r}
        falling = float(np.prod(self.mu - np.arange(order)))
        if falling == 0.0:
            return np.zeros_like(x)
        with np.errstate(divide="ignore"):
            return falling * np.power(x, self.mu - order)

    def laplace(self, s: float) -> float:
        """Transformada de Laplace en s (requiere a = 0)."""
        if self.a != 0.0 and self.kind != "constant":
            raise ValueError("la transformada de Laplace requiere punto de referencia a = 0")
        if self.kind == "constant":
            return self.c / s
        if self.kind == "exponential":
            if not s > self.k:
                raise ValueError(f"la transformada de e^(kt) requiere s > k = {self.k}")
            return 1.0 / (s - self.k)
        if self.kind == "polynomial":
            return float(
                sum(c * math.factorial(i) / s ** (i + 1) for i, c in enumerate(self.coeffs))
            )
        return float(special.gamma(self.mu + 1.0) / s ** (self.mu + 1.0))

    def sample(self, a: float, b: float, n: int) -> SampledFunction:
        return SampledFunction.from_callable(self, a, b, n)


class PsiFunction(BaseModel):
    """
    Función ψ estrictamente creciente respecto de la cual se integra.

    Variantes: identity (ψ = t), log (Hadamard), power_shifted (ψ = t^{ρ+1},
    Katugampola), power (ψ = t^σ, Erdélyi–Kober) y custom.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    variant: Literal["identity", "log", "power_shifted", "power", "custom"]
    rho: float = Field(default=0.0, gt=-1)
    sigma: float = Field(default=1.0, gt=0)
    func: Optional[ArrayFn] = None
    deriv: Optional[ArrayFn] = None

    @model_validator(mode="after")
    def _check_custom(self) -> "PsiFunction":
        if self.variant == "custom" and (self.func is None or self.deriv is None):
            raise ValueError("una ψ personalizada necesita ψ y ψ′")
        return self

    @classmethod
    def identity(cls) -> "PsiFunction":
        return cls(variant="identity")

    @classmethod
    def log(cls) -> "PsiFunction":
        return cls(variant="log")

    @classmethod
    def power_shifted(cls, rho: float) -> "PsiFunction":
        return cls(variant="power_shifted", rho=rho)

    @classmethod
    def power(cls, sigma: float) -> "PsiFunction":
        return cls(variant="power", sigma=sigma)

    @classmethod
    def custom(cls, func: ArrayFn, deriv: ArrayFn) -> "PsiFunction":
        return cls(variant="custom", func=func, deriv=deriv)

    @property
    def exponent(self) -> float:
        """Exponente de las variantes potencia."""
        return self.rho + 1.0 if self.variant == "power_shifted" else self.sigma

    def value(self, t: ArrayLike) -> NDArray[np.float64]:
        x = np.asarray(t, dtype=float)
        if self.variant == "identity":
            return x.copy()
        if self.variant == "log":
            return np.log(x)
        if self.variant == "custom":
            assert self.func is not None
            return np.asarray(self.func(x), dtype=float)
        return np.power(x, self.exponent)

    def derivative(self, t: ArrayLike) -> NDArray[np.float64]:
        x = np.asarray(t, dtype=float)
        if self.variant == "identity":
            return np.ones_like(x)
        if self.variant == "log":
            return 1.0 / x
        if self.variant == "custom":
            assert self.deriv is not None
            return np.asarray(self.deriv(x), dtype=float)
        with np.errstate(divide="ignore"):
            return self.exponent * np.power(x, self.exponent - 1.0)
