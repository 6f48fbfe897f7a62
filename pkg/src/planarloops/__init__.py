"""Temperley-Lieb diagrams, the dga of planar loops, its small model, and exact homology."""

__version__ = "0.1.0"

from .exactlin import BACKEND, QQ, ZZ, CoeffRing, prime_field  # noqa: E402

__all__ = ["BACKEND", "QQ", "ZZ", "CoeffRing", "prime_field", "__version__"]
