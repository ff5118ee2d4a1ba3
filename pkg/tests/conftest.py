"""Fixtures compartidas de la suite."""

from typing import Callable

import numpy as np
import pytest
from numpy.typing import NDArray

from genfrac.models import KernelSpec, SampledFunction
from genfrac.services.kernel_algebra import make_kernel


@pytest.fixture
def rl_kernel() -> KernelSpec:
    return make_kernel("rl")


@pytest.fixture
def decay_kernel() -> KernelSpec:
    """Prabhakar con ρ = 1, ω = −1: A(x) = e^{−x} a órdenes (1, 1)."""
    return make_kernel("prabhakar", {"rho": 1, "omega": -1})


@pytest.fixture
def sample() -> Callable[..., SampledFunction]:
    """sample(fn, a=0, b=1, n=1024) sobre la malla uniforme."""

    def _sample(fn: Callable, a: float = 0.0, b: float = 1.0, n: int = 1024) -> SampledFunction:
        return SampledFunction.from_callable(fn, a, b, n)

    return _sample


@pytest.fixture
def interior() -> Callable[[SampledFunction], NDArray[np.bool_]]:
    """Máscara de nodos con t ∈ [a + 0.1(b−a), b − 0.1(b−a)]."""

    def _interior(f: SampledFunction) -> NDArray[np.bool_]:
        margin = 0.1 * (f.b - f.a)
        t = f.t
        return (t >= f.a + margin) & (t <= f.b - margin)

    return _interior
