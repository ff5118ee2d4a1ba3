"""Configuración de la librería desde variables de entorno."""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Configuración de la librería desde variables de entorno (prefijo GENFRAC_)."""

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", env_prefix="GENFRAC_", extra="ignore"
    )

    # Truncamiento de series
    max_terms: int = 64
    tail_tol: float = 1e-12

    # Mallas por defecto
    grid_intervals: int = 1024
    laplace_intervals: int = 4096
    """Malla densa usada para verificar el símbolo de Laplace."""

    # Iteraciones de punto fijo
    picard_tol: float = 1e-10
    max_picard: int = 200

    # Logging
    log_level: str = "INFO"


# Instancia global de configuración
settings = Settings()
