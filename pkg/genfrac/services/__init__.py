"""Servicios numéricos de genfrac."""
