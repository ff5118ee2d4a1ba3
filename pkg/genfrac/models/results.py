"""Resultados de los verificadores y solucionadores."""

from typing import Optional

from pydantic import BaseModel, ConfigDict

from genfrac.models.functions import SampledFunction


class LaplaceCheck(BaseModel):
    """Transformada numérica frente a la predicción del símbolo."""

    model_config = ConfigDict(frozen=True)

    numeric: float
    predicted: float
    warning: Optional[str] = None

    @property
    def relative_gap(self) -> float:
        scale = max(abs(self.predicted), abs(self.numeric))
        return 0.0 if scale == 0.0 else abs(self.numeric - self.predicted) / scale


class FixedPointResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    solution: SampledFunction
    residual: float
    iterations: int
    diff_norms: tuple[float, ...]
    ratio_bound: float
    """Cota a priori de la razón de contracción."""

    @property
    def ratios(self) -> list[float]:
        d = self.diff_norms
        return [d[i + 1] / d[i] for i in range(len(d) - 1) if d[i] > 0]


class WindowReport(BaseModel):
    """Diagnóstico de la iteración de Picard en una ventana."""

    model_config = ConfigDict(frozen=True)

    index: int
    t_start: float
    t_end: float
    iterations: int
    ratios: tuple[float, ...]
    contraction_constant: float


class CauchySolution(BaseModel):
    model_config = ConfigDict(frozen=True)

    solution: SampledFunction
    residual: float
    step: float
    windows: tuple[WindowReport, ...]
