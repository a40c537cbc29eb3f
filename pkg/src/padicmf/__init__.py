"""Exact p-adic filtered Frobenius modules and admissibility verdicts."""

__version__ = "0.1.0"
