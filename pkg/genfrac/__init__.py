"""genfrac - Cálculo fraccionario con núcleos analíticos generales."""

__version__ = "0.1.0"
