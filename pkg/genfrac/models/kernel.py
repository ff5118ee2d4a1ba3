"""Núcleos analíticos, pares de órdenes y política de truncamiento."""

import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from genfrac.core.config import settings

CatalogId = Literal["rl", "prabhakar", "ab", "gpf", "ml", "explicit"]


class OrderPair(BaseModel):
    """Órdenes reales (α, β) del operador, con α > 0 y β ≥ 0."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0, allow_inf_nan=False)
    beta: float = Field(ge=0, allow_inf_nan=False)


class TruncationPolicy(BaseModel):
    """Número máximo de términos y tolerancia de cola para toda serie infinita."""

    model_config = ConfigDict(frozen=True)

    max_terms: int = Field(default_factory=lambda: settings.max_terms, gt=0)
    tail_tol: float = Field(default_factory=lambda: settings.tail_tol, gt=0)


class KernelSpec(BaseModel):
    """
    Núcleo analítico A(x) = Σ a_n(α, β) xⁿ.

    Los núcleos de catálogo calculan a_n a partir de `params` y de los órdenes
    con que se usen. Los núcleos explícitos guardan una lista finita de
    coeficientes (a_n = 0 fuera de la lista); si además traen `gamma_coeffs`,
    esos son los pesos a_nΓ(βn+α) exactos para `bound_order`.
    `truncated` marca una lista que corta una serie infinita: esos núcleos no
    son polinomios y no pueden dar más términos de los guardados.
    """

    model_config = ConfigDict(frozen=True)

    catalog_id: CatalogId
    params: tuple[tuple[str, float], ...] = ()
    coeffs: Optional[tuple[float, ...]] = None
    gamma_coeffs: Optional[tuple[float, ...]] = None
    bound_order: Optional[tuple[float, float]] = None
    radius: float = Field(default=math.inf, gt=0)
    truncated: bool = False
    label: str = ""

    @model_validator(mode="after")
    def _check_coefficients(self) -> "KernelSpec":
        if self.catalog_id == "explicit":
            if not self.coeffs:
                raise ValueError("un núcleo explícito necesita al menos un coeficiente")
            if not all(math.isfinite(c) for c in self.coeffs):
                raise ValueError("los coeficientes explícitos deben ser finitos")
        if self.gamma_coeffs is not None and self.bound_order is None:
            raise ValueError("gamma_coeffs requiere bound_order")
        return self

    def param(self, name: str, default: Optional[float] = None) -> Optional[float]:
        """Valor de un parámetro del catálogo, o `default` si no está."""
        for key, value in self.params:
            if key == name:
                return value
        return default

    def __str__(self) -> str:
        return self.label or self.catalog_id
