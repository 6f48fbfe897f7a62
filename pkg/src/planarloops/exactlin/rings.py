"""Exact coefficient rings: the integers, the rationals and prime fields."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import re


class RingError(ValueError):
    """Raised for an invalid ring description or a non-invertible element."""


@dataclass(frozen=True)
class CoeffRing:
    """A coefficient ring R together with the loop parameter ``a`` in R.

    ``kind`` is ``"Z"``, ``"Q"`` or ``"Fp"``.  Elements are plain Python
    ``int`` (Z, and F_p reduced to ``0..p-1``) or ``Fraction`` (Q).
    """

    kind: str
    p: int | None = None
    a: object = field(default=0)

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp"):
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp":
            from sympy import isprime

            if self.p is None or not isprime(self.p):
                raise RingError(f"F_p needs a prime p, got {self.p!r}")
        elif self.p is not None:
            raise RingError("only F_p takes a characteristic")
        object.__setattr__(self, "a", self.coerce(self.a))

    @classmethod
    def parse(cls, text: str, a=0) -> "CoeffRing":
        """Read ``Z``, ``Q``, ``F2``, ``F_5`` or ``Fp:7``."""
        t = text.strip().replace("_", "")
        if t in ("Z", "ZZ"):
            return cls("Z", a=a)
        if t in ("Q", "QQ"):
            return cls("Q", a=a)
        m = re.fullmatch(r"(?:F|GF|Fp:?|Z/)(\d+)", t)
        if m:
            return cls("Fp", int(m.group(1)), a=a)
        raise RingError(f"cannot read ring {text!r}")

    def with_parameter(self, a) -> "CoeffRing":
        return CoeffRing(self.kind, self.p, a)

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "Fp" else 0

    @property
    def weight_graded(self) -> bool:
        """Whether loop counting is a grading, which needs a = 0 here."""
        return self.a == 0

    @property
    def label(self) -> str:
        return {"Z": "Z", "Q": "Q"}.get(self.kind) or f"F{self.p}"

    def __str__(self):
        return f"({self.label}, a={self.a})"

    def coerce(self, x):
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise RingError(f"{x} is not an integer")
                return x.numerator
            if int(x) != x:
                raise RingError(f"{x} is not an integer")
            return int(x)
        if self.kind == "Q":
            return Fraction(x)
        x = Fraction(x)
        return (x.numerator * pow(x.denominator, -1, self.p)) % self.p

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def is_unit(self, x) -> bool:
        x = self.coerce(x)
        if self.kind == "Z":
            return x in (1, -1)
        return x != 0

    def inverse(self, x):
        x = self.coerce(x)
        if not self.is_unit(x):
            raise RingError(f"{x} is not invertible over {self.label}")
        if self.kind == "Z":
            return x
        if self.kind == "Q":
            return 1 / x
        return pow(x, -1, self.p)

    def add(self, x, y):
        return self.coerce(x + y)

    def mul(self, x, y):
        return self.coerce(x * y)

    def power_of_a(self, k: int):
        return self.coerce(self.a**k)

    def factorial_invertible(self, k: int) -> bool:
        if self.kind == "Q":
            return True
        if self.kind == "Fp":
            return k < self.p
        return k <= 1


ZZ = CoeffRing("Z")
QQ = CoeffRing("Q")


def prime_field(p: int, a=0) -> CoeffRing:
    return CoeffRing("Fp", p, a)
