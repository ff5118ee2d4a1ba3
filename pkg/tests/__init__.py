"""Pruebas unitarias para los nodos del grafo."""
