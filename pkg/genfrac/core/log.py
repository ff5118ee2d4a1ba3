"""Configuración del logging de la librería."""

import logging
import sys
from typing import Optional

from genfrac.core.config import settings

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"

_handler: Optional[logging.StreamHandler] = None  # type: ignore[type-arg]


def configure_logging(level: Optional[str] = None) -> logging.Logger:
    """
    Instala un único handler hacia stderr para el logger raíz de genfrac.

    stdout queda reservado para el CSV de resultados. Cada llamada retira el
    handler anterior sin vaciarlo (su stream puede estar ya cerrado) y crea
    uno nuevo sobre el sys.stderr actual.

    Args:
        level: Nivel de log; por defecto settings.log_level

    Returns:
        Logger raíz del paquete
    """
    global _handler

    logger = logging.getLogger("genfrac")
    logger.setLevel((level or settings.log_level).upper())

    if _handler is not None:
        logger.removeHandler(_handler)

    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(_handler)
    logger.propagate = False

    return logger
