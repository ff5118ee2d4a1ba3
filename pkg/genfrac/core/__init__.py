"""Configuración, errores y funciones especiales compartidas."""
