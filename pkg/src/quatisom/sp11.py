"""The group Sp(1,1) and the signature-(1,1) Hermitian form on H^2.

Vectors are columns X = (x1, x2) over the quaternions, with form
<X, Y> = conj(x1) y1 - conj(x2) y2, i.e. X* J Y for J = diag(1, -1).
Sp(1,1) is the group of 2x2 quaternionic matrices preserving the form;
membership is equivalent to the entrywise conditions

    |a|^2 - |b|^2 = 1,   |c|^2 - |d|^2 = -1,   a conj(c) = b conj(d),

together with their column counterparts (all are checked).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .config import resolve
from .errors import NotInSp11Error
from .quaternion import ONE, ZERO, Quaternion

#: Membership uses a stricter relative tolerance than the classification
#: bands so that membership noise never pollutes region decisions.
MEMBERSHIP_RTOL = 1e-9


@dataclass(frozen=True)
class QMatrix2:
    """2x2 quaternionic matrix [[a, b], [c, d]]."""

    a: Quaternion
    b: Quaternion
    c: Quaternion
    d: Quaternion

    def __matmul__(self, other: "QMatrix2") -> "QMatrix2":
        return QMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "QMatrix2":
        return QMatrix2(-self.a, -self.b, -self.c, -self.d)

    def adjoint(self) -> "QMatrix2":
        """Conjugate transpose."""
        return QMatrix2(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())

    def apply(self, X: "HVector") -> "HVector":
        return HVector(self.a * X.x1 + self.b * X.x2,
                       self.c * X.x1 + self.d * X.x2)

    def entries(self) -> tuple[Quaternion, Quaternion, Quaternion, Quaternion]:
        return (self.a, self.b, self.c, self.d)

    @classmethod
    def identity(cls) -> "QMatrix2":
        return cls(ONE, ZERO, ZERO, ONE)

    @classmethod
    def diagonal(cls, u: Quaternion, v: Quaternion) -> "QMatrix2":
        return cls(u, ZERO, ZERO, v)

    @classmethod
    def from_json(cls, data: Mapping[str, Sequence[float]]) -> "QMatrix2":
        try:
            return cls(*(Quaternion.from_json(data[k]) for k in ("a", "b", "c", "d")))
        except KeyError as exc:
            raise ValueError(f"matrix record missing entry {exc.args[0]!r}") from None

    def to_json(self) -> dict[str, list[float]]:
        return {"a": self.a.to_json(), "b": self.b.to_json(),
                "c": self.c.to_json(), "d": self.d.to_json()}

    def isclose(self, other: "QMatrix2", tol: float | None = None) -> bool:
        return all(p.isclose(q, tol) for p, q in zip(self.entries(), other.entries()))

    def entry_scale(self) -> float:
        return 1.0 + sum(q.norm2() for q in self.entries())


@dataclass(frozen=True)
class HVector:
    """Column vector in H^{1,1}."""

    x1: Quaternion
    x2: Quaternion

    def rscale(self, q: Quaternion) -> "HVector":
        """Right scalar multiple X q (projectively the same point)."""
        return HVector(self.x1 * q, self.x2 * q)

    def norm2(self) -> float:
        return self.x1.norm2() + self.x2.norm2()

    def is_zero(self) -> bool:
        return self.norm2() == 0.0


class VectorSign(enum.Enum):
    NEGATIVE = "negative"
    ISOTROPIC = "isotropic"
    POSITIVE = "positive"


def herm_form(X: HVector, Y: HVector) -> Quaternion:
    """<X, Y> = conj(x1) y1 - conj(x2) y2."""
    return X.x1.conj() * Y.x1 - X.x2.conj() * Y.x2


def vector_sign(X: HVector, tol: float | None = None) -> VectorSign:
    """Sign class of <X, X>; values within tol * |X|^2 of zero are isotropic."""
    if X.is_zero():
        raise ValueError("vector sign undefined for the zero vector")
    e = resolve(tol)
    s = herm_form(X, X).w
    if abs(s) <= e * X.norm2():
        return VectorSign.ISOTROPIC
    return VectorSign.NEGATIVE if s < 0 else VectorSign.POSITIVE


def membership_residual(P: QMatrix2) -> float:
    """Largest relative residual of the six Sp(1,1) entry conditions."""
    a, b, c, d = P.entries()
    scale = P.entry_scale()
    rows = (
        abs(a.norm2() - b.norm2() - 1.0),
        abs(c.norm2() - d.norm2() + 1.0),
        (a * c.conj() - b * d.conj()).norm(),
        abs(a.norm2() - c.norm2() - 1.0),
        abs(b.norm2() - d.norm2() + 1.0),
        (a.conj() * b - c.conj() * d).norm(),
    )
    return max(rows) / scale


def is_sp11(P: QMatrix2, tol: float | None = None) -> bool:
    """Whether P preserves the form (P* J P = J) to tolerance.

    Never raises; returns False for non-members.
    """
    rtol = MEMBERSHIP_RTOL if tol is None else resolve(tol)
    return membership_residual(P) <= rtol


def require_sp11(P: QMatrix2, tol: float | None = None) -> None:
    if not is_sp11(P, tol):
        raise NotInSp11Error(
            f"not in Sp(1,1): membership residual {membership_residual(P):.3e}")


def sp11_inverse(P: QMatrix2, tol: float | None = None) -> QMatrix2:
    """Group inverse J P* J = [[conj(a), -conj(c)], [-conj(b), conj(d)]]."""
    require_sp11(P, tol)
    return QMatrix2(P.a.conj(), -P.c.conj(), -P.b.conj(), P.d.conj())


# ---------------------------------------------------------------------------
# Seeded sampling
# ---------------------------------------------------------------------------

SAMPLER_KINDS = ("generic", "boundary", "near-parabolic")


def hyperbolic_boost(t: float) -> QMatrix2:
    """[[cosh t, sinh t], [sinh t, cosh t]]; a one-parameter subgroup."""
    ch, sh = math.cosh(t), math.sinh(t)
    return QMatrix2(Quaternion(ch), Quaternion(sh), Quaternion(sh), Quaternion(ch))


def tangency_translation(s: float) -> QMatrix2:
    """[[1 + s i, -s i], [s i, 1 - s i]]; parabolic with (tau, rho) = (2, 6)."""
    return QMatrix2(Quaternion(1.0, s, 0.0, 0.0), Quaternion(0.0, -s, 0.0, 0.0),
                    Quaternion(0.0, s, 0.0, 0.0), Quaternion(1.0, -s, 0.0, 0.0))


def _unit_quaternion(rng: np.random.Generator) -> Quaternion:
    while True:
        v = rng.normal(size=4)
        n = float(np.linalg.norm(v))
        if n > 1e-8:
            return Quaternion(*(v / n))


def _unit_near_identity(rng: np.random.Generator, scale: float) -> Quaternion:
    v = rng.normal(size=3)
    n = float(np.linalg.norm(v))
    if n == 0.0:
        return ONE
    theta = scale * rng.uniform(0.2, 1.0)
    return Quaternion(0.0, *(v / n * theta)).exp()


def _random_diag(rng: np.random.Generator) -> QMatrix2:
    return QMatrix2.diagonal(_unit_quaternion(rng), _unit_quaternion(rng))


def _kak(rng: np.random.Generator, t: float) -> QMatrix2:
    return _random_diag(rng) @ hyperbolic_boost(t) @ _random_diag(rng)


def sample_sp11(seed: int, kind: str = "generic") -> QMatrix2:
    """Deterministic seeded sample of an Sp(1,1) element.

    The construction is K1 A(t) K2 with K1, K2 unit-quaternion diagonal
    matrices and A(t) a hyperbolic boost, so membership holds exactly up
    to rounding.  Kinds:

    - ``generic``: t exponential with mean 1;
    - ``boundary``: t = 0 (unit-diagonal products, always elliptic);
    - ``near-parabolic``: a conjugated tangency translation, at
      (tau, rho) = (+-2, 6), composed with a group element at distance
      about delta from the identity, delta in [3e-3, 1e-1].  Off the
      parabola the invariants move like delta^2, so this floor keeps
      sampled invariants clear of the classification bands by about an
      order of magnitude.

    Randomness comes from ``numpy.random.default_rng(seed)`` (PCG64,
    64-bit streams); a fixed (seed, kind) always yields the same matrix.
    """
    if kind not in SAMPLER_KINDS:
        raise ValueError(f"unknown sampler kind {kind!r}; expected one of {SAMPLER_KINDS}")
    rng = np.random.default_rng(seed)
    if kind == "generic":
        return _kak(rng, float(rng.exponential(1.0)))
    if kind == "boundary":
        return _random_diag(rng) @ _random_diag(rng)

    # near-parabolic
    s = float(rng.uniform(0.5, 2.0)) * (1.0 if rng.random() < 0.5 else -1.0)
    base = tangency_translation(s)
    if rng.random() < 0.5:
        base = -base  # lands on (-2, 6)
    Q = _kak(rng, float(rng.uniform(0.0, 1.0)))
    B = Q @ base @ sp11_inverse(Q)
    delta = 10.0 ** float(rng.uniform(-2.5, -1.0))
    E = (QMatrix2.diagonal(_unit_near_identity(rng, delta), _unit_near_identity(rng, delta))
         @ hyperbolic_boost(delta * float(rng.normal()))
         @ QMatrix2.diagonal(_unit_near_identity(rng, delta), _unit_near_identity(rng, delta)))
    return B @ E
