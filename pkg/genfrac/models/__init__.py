"""Esquemas Pydantic para núcleos, funciones muestreadas, operadores y resultados."""

from genfrac.models.functions import ClosedFormFunction, PsiFunction, SampledFunction
from genfrac.models.kernel import CatalogId, KernelSpec, OrderPair, TruncationPolicy
from genfrac.models.operators import (
    CauchyProblem,
    DerivOperator,
    GenOperator,
    PartitionTerm,
    SymbolQuery,
)
from genfrac.models.results import CauchySolution, FixedPointResult, LaplaceCheck, WindowReport

__all__ = [
    "CatalogId",
    "CauchyProblem",
    "CauchySolution",
    "ClosedFormFunction",
    "DerivOperator",
    "FixedPointResult",
    "GenOperator",
    "KernelSpec",
    "LaplaceCheck",
    "OrderPair",
    "PartitionTerm",
    "PsiFunction",
    "SampledFunction",
    "SymbolQuery",
    "TruncationPolicy",
    "WindowReport",
]
