"""Lectura y escritura de muestras en CSV `t,value` con 17 cifras significativas."""

import io
import math
from pathlib import Path
from typing import IO, Union

import numpy as np

from genfrac.core.errors import DomainError, ProblemFileError
from genfrac.models.functions import SampledFunction

HEADER = "t,value"
FLOAT_FORMAT = "%.17g"
GRID_TOL = 1e-9


def write_csv(f: SampledFunction, target: Union[str, Path, IO[str]]) -> None:
    """Escribe una fila por nodo, con cabecera `t,value`."""
    data = np.column_stack([f.t, f.values])
    np.savetxt(target, data, fmt=FLOAT_FORMAT, delimiter=",", header=HEADER, comments="")


def format_csv(f: SampledFunction) -> str:
    buffer = io.StringIO()
    write_csv(f, buffer)
    return buffer.getvalue()


def read_csv(source: Union[str, Path]) -> SampledFunction:
    """
    Lee un CSV `t,value` sobre una malla uniforme.

    Raises:
        ProblemFileError: Archivo ilegible o mal formado
        DomainError: Nodos no equiespaciados
    """
    try:
        data = np.loadtxt(source, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as e:
        raise ProblemFileError(f"no se pudo leer {source}: {str(e)}") from e
    if data.shape[1] != 2 or data.shape[0] < 2:
        raise ProblemFileError(f"{source}: se esperaban al menos dos filas con columnas t,value")

    t, values = data[:, 0], data[:, 1]
    steps = np.diff(t)
    h = (t[-1] - t[0]) / (t.size - 1)
    if not np.allclose(steps, h, rtol=GRID_TOL, atol=GRID_TOL * abs(h)):
        raise DomainError(f"{source}: los nodos t no son equiespaciados")
    return SampledFunction(a=float(t[0]), b=float(t[-1]), values=values)


def match_grid(f: SampledFunction, a: float, b: float, n: int) -> SampledFunction:
    """Comprueba que f está en la malla de n subintervalos de [a, b]."""
    scale = max(abs(a), abs(b), 1.0)
    if f.n != n or not (
        math.isclose(f.a, a, abs_tol=GRID_TOL * scale)
        and math.isclose(f.b, b, abs_tol=GRID_TOL * scale)
    ):
        raise DomainError(
            f"el CSV tiene {f.n} subintervalos en [{f.a:g}, {f.b:g}]; "
            f"se esperaban {n} en [{a:g}, {b:g}]"
        )
    return SampledFunction(a=a, b=b, values=f.values)
