"""Interfaz de línea de comandos de genfrac."""
