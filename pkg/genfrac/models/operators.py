"""Operadores fraccionarios generales, derivadas, símbolos y problemas de Cauchy."""

import math
from typing import Callable, Literal

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from genfrac.models.kernel import KernelSpec, OrderPair, TruncationPolicy

RhsFn = Callable[[NDArray[np.float64], NDArray[np.float64]], NDArray[np.float64]]


class GenOperator(BaseModel):
    """ᴬI^{α,β}_{a+} sobre el intervalo [a, b]."""

    model_config = ConfigDict(frozen=True)

    kernel: KernelSpec
    order: OrderPair
    interval: tuple[float, float]
    trunc: TruncationPolicy = Field(default_factory=TruncationPolicy)

    @field_validator("interval")
    @classmethod
    def _check_interval(cls, v: tuple[float, float]) -> tuple[float, float]:
        a, b = v
        if not (math.isfinite(a) and math.isfinite(b) and b > a):
            raise ValueError(f"intervalo inválido: [{a}, {b}]")
        return v

    @property
    def a(self) -> float:
        return self.interval[0]

    @property
    def b(self) -> float:
        return self.interval[1]

    @property
    def length(self) -> float:
        return self.interval[1] - self.interval[0]

    def with_order(self, alpha: float, beta: float | None = None) -> "GenOperator":
        beta = self.order.beta if beta is None else beta
        return self.model_copy(update={"order": OrderPair(alpha=alpha, beta=beta)})

    def with_interval(self, a: float, b: float) -> "GenOperator":
        return GenOperator(kernel=self.kernel, order=self.order, interval=(a, b), trunc=self.trunc)

    def with_kernel(self, kernel: KernelSpec, order: OrderPair) -> "GenOperator":
        return GenOperator(kernel=kernel, order=order, interval=self.interval, trunc=self.trunc)


class DerivOperator(BaseModel):
    """Derivada de tipo RL o Caputo construida con el núcleo recíproco Ā."""

    model_config = ConfigDict(frozen=True)

    base: GenOperator
    m: int = Field(gt=0)
    flavor: Literal["rl_type", "caputo_type"]
    recip: KernelSpec

    @model_validator(mode="after")
    def _check_m(self) -> "DerivOperator":
        if not self.m - self.base.order.alpha > 0:
            raise ValueError(f"m − α debe ser positivo (m={self.m}, α={self.base.order.alpha})")
        return self

    @property
    def recip_order(self) -> OrderPair:
        return OrderPair(alpha=self.m - self.base.order.alpha, beta=self.base.order.beta)


class SymbolQuery(BaseModel):
    """Punto (s o k) donde se evalúa el símbolo de Laplace o de Fourier."""

    model_config = ConfigDict(frozen=True)

    kernel: KernelSpec
    order: OrderPair
    point: complex
    trunc: TruncationPolicy = Field(default_factory=TruncationPolicy)


class PartitionTerm(BaseModel):
    """Término de Faà di Bruno: multiplicidades (r_1..r_m) con Σ j·r_j = m."""

    model_config = ConfigDict(frozen=True)

    r: int
    multiplicities: tuple[int, ...]
    weight: float

    @model_validator(mode="after")
    def _check_constraints(self) -> "PartitionTerm":
        if any(rj < 0 for rj in self.multiplicities):
            raise ValueError("multiplicidades negativas")
        if sum(self.multiplicities) != self.r:
            raise ValueError("Σ r_j debe ser r")
        m = len(self.multiplicities)
        if sum((j + 1) * rj for j, rj in enumerate(self.multiplicities)) != m:
            raise ValueError("Σ j·r_j debe ser m")
        return self

    @property
    def m(self) -> int:
        return len(self.multiplicities)


class CauchyProblem(BaseModel):
    """
    Problema RL-D^γ u = ᴬI^{α,β} f(t, u) con datos iniciales C_1..C_n, n = ⌈γ⌉.

    `rhs` debe aceptar arrays de numpy en ambos argumentos. `lipschitz` es la
    constante C de |f(t,y₁) − f(t,y₂)| ≤ C|y₁ − y₂|.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kernel: KernelSpec
    alpha: float = Field(gt=0, allow_inf_nan=False)
    beta: float = Field(ge=0, allow_inf_nan=False)
    gamma: float = Field(gt=0, allow_inf_nan=False)
    a: float = Field(allow_inf_nan=False)
    b: float = Field(allow_inf_nan=False)
    constants: tuple[float, ...]
    rhs: RhsFn
    lipschitz: float = Field(gt=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _check_data(self) -> "CauchyProblem":
        if not self.b > self.a:
            raise ValueError(f"intervalo inválido: [{self.a}, {self.b}]")
        if len(self.constants) != self.n:
            raise ValueError(
                f"se esperaban n = ⌈γ⌉ = {self.n} constantes iniciales, hay {len(self.constants)}"
            )
        return self

    @property
    def n(self) -> int:
        return math.ceil(self.gamma)

    @property
    def order(self) -> OrderPair:
        return OrderPair(alpha=self.alpha, beta=self.beta)
