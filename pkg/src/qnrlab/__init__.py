"""qnrlab: q-numerical radii in semi-Hilbertian spaces and sectorial matrix means."""

from . import errors, harness, kernel, means, qnr, sectorial, semihilbert

__all__ = [
    "errors",
    "harness",
    "kernel",
    "means",
    "qnr",
    "sectorial",
    "semihilbert",
]
