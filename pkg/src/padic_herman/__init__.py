"""Exact p-adic rational-map dynamics: Siegel disk cycles and Herman ring construction."""

__version__ = "0.1.0"
