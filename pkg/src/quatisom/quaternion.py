"""Floating-point quaternion arithmetic.

Quaternions q = w + x i + y j + z k with i^2 = j^2 = k^2 = ijk = -1.
The complex numbers are identified with the real subalgebra generated
by i, so every quaternion decomposes uniquely as q = a + b j with
a, b complex.  Storage and serialization order is (w, x, y, z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .config import resolve


@dataclass(frozen=True)
class Quaternion:
    """Element of the real 4-dimensional division algebra H."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self) -> None:
        for name in ("w", "x", "y", "z"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)):
                raise TypeError(f"quaternion component {name} must be real, got {v!r}")
            if not math.isfinite(v):
                raise ValueError(f"quaternion component {name} is not finite: {v!r}")
            object.__setattr__(self, name, float(v))

    # -- algebra ----------------------------------------------------------

    def __add__(self, other: "Quaternion | float") -> "Quaternion":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other: "Quaternion | float") -> "Quaternion":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "Quaternion | float") -> "Quaternion":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: "Quaternion | float") -> "Quaternion":
        """Non-commutative quaternion product."""
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other,
                              self.y * other, self.z * other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        w1, x1, y1, z1 = self.w, self.x, self.y, self.z
        w2, x2, y2, z2 = other.w, other.x, other.y, other.z
        return Quaternion(
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        )

    def __rmul__(self, other: float) -> "Quaternion":
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __truediv__(self, other: float) -> "Quaternion":
        if isinstance(other, (int, float)):
            return self * (1.0 / other)
        return NotImplemented

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        """Squared norm w^2 + x^2 + y^2 + z^2."""
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    __abs__ = norm

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise ZeroDivisionError("division by zero quaternion")
        return Quaternion(self.w / n2, -self.x / n2, -self.y / n2, -self.z / n2)

    @property
    def re(self) -> float:
        """Real part."""
        return self.w

    def im(self) -> "Quaternion":
        """Imaginary part as a quaternion, (q - conj(q)) / 2."""
        return Quaternion(0.0, self.x, self.y, self.z)

    def im_norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def exp(self) -> "Quaternion":
        """Quaternion exponential."""
        v = self.im_norm()
        s = math.exp(self.w)
        if v == 0.0:
            return Quaternion(s, 0.0, 0.0, 0.0)
        f = s * math.sin(v) / v
        return Quaternion(s * math.cos(v), f * self.x, f * self.y, f * self.z)

    # -- similarity classes ------------------------------------------------

    def similarity_invariants(self) -> tuple[float, float]:
        """(Re q, |q|); two quaternions are similar iff these agree."""
        return (self.w, self.norm())

    def canonical_rep(self) -> complex:
        """Similarity-class representative Re(q) + |Im(q)| i.

        Always takes the nonnegative-imaginary-part complex number, which
        is unique in the class (and equal to q itself when q is real).
        """
        return complex(self.w, self.im_norm())

    def complex_decompose(self) -> tuple[complex, complex]:
        """Unique (a, b) in C x C with q = a + b j."""
        return (complex(self.w, self.x), complex(self.y, self.z))

    # -- construction helpers ----------------------------------------------

    @classmethod
    def from_complex_pair(cls, a: complex, b: complex) -> "Quaternion":
        """Reassemble a + b j.  Pure field copying, hence exact."""
        a = complex(a)
        b = complex(b)
        return cls(a.real, a.imag, b.real, b.imag)

    @classmethod
    def from_complex(cls, a: complex) -> "Quaternion":
        a = complex(a)
        return cls(a.real, a.imag, 0.0, 0.0)

    @classmethod
    def from_json(cls, data: Sequence[float]) -> "Quaternion":
        if len(data) != 4:
            raise ValueError(f"quaternion JSON form must have 4 entries, got {len(data)}")
        return cls(*(float(v) for v in data))

    def to_json(self) -> list[float]:
        return [self.w, self.x, self.y, self.z]

    def __iter__(self) -> Iterator[float]:
        yield self.w
        yield self.x
        yield self.y
        yield self.z

    def isclose(self, other: "Quaternion", tol: float | None = None) -> bool:
        e = resolve(tol)
        return (self - other).norm() <= e * (1.0 + self.norm() + other.norm())

    def __repr__(self) -> str:
        return f"Quaternion({self.w:g}, {self.x:g}, {self.y:g}, {self.z:g})"


def _coerce(value: "Quaternion | float"):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float)):
        return Quaternion(float(value), 0.0, 0.0, 0.0)
    return NotImplemented


ZERO = Quaternion(0.0, 0.0, 0.0, 0.0)
ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
