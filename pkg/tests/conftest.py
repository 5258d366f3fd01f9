"""Shared construction helpers for the test suite."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from quatisom import QMatrix2, Quaternion, hyperbolic_boost
from quatisom.sp11 import HVector, herm_form


def rand_quaternion(rng: np.random.Generator, scale: float = 1.0) -> Quaternion:
    return Quaternion(*(scale * rng.normal(size=4)))


def rand_unit_quaternion(rng: np.random.Generator) -> Quaternion:
    v = rng.normal(size=4)
    return Quaternion(*(v / np.linalg.norm(v)))


def rand_ball_point(rng: np.random.Generator, rmax: float = 0.95) -> Quaternion:
    v = rng.normal(size=4)
    v *= rng.uniform(0.0, rmax) / np.linalg.norm(v)
    return Quaternion(*v)


def random_diag(rng: np.random.Generator) -> QMatrix2:
    return QMatrix2.diagonal(rand_unit_quaternion(rng), rand_unit_quaternion(rng))


def moderate_member(rng: np.random.Generator) -> QMatrix2:
    """Group element with boost parameter <= 1 (mild conditioning)."""
    return random_diag(rng) @ hyperbolic_boost(float(rng.uniform(0.0, 1.0))) @ random_diag(rng)


def complex_matrix(entries: list[list[complex]]) -> QMatrix2:
    """QMatrix2 with complex entries (no j, k parts)."""
    (a, b), (c, d) = entries
    return QMatrix2(*(Quaternion.from_complex(z) for z in (a, b, c, d)))


def vertex_parabolic() -> QMatrix2:
    """a = 1+i, b = 1, c = -1, d = -1+i: screw-parabolic at (tau, rho) = (0, 2)."""
    return QMatrix2(Quaternion(1, 1, 0, 0), Quaternion(1, 0, 0, 0),
                    Quaternion(-1, 0, 0, 0), Quaternion(-1, 1, 0, 0))


def heisenberg_translation() -> QMatrix2:
    """[[1+i, -i], [i, 1-i]]: parabolic translation at (tau, rho) = (2, 6)."""
    return QMatrix2(Quaternion(1, 1, 0, 0), Quaternion(0, -1, 0, 0),
                    Quaternion(0, 1, 0, 0), Quaternion(1, -1, 0, 0))


def screw_parabolic(theta: float) -> QMatrix2:
    """e^{i theta} [[1-i, i], [-i, 1+i]]: non-diagonalizable with double
    eigenvalue e^{i theta}, at the arc point (2 cos theta, 2 + 4 cos^2 theta)."""
    w = cmath.exp(1j * theta)
    return complex_matrix([[w * (1 - 1j), w * 1j], [-w * 1j, w * (1 + 1j)]])


def case_v_elliptic(theta: float, u: Quaternion) -> QMatrix2:
    """diag(e^{i theta}, u e^{i theta} u^{-1}): diagonalizable with a double
    eigenvalue class; elliptic, fixes the origin."""
    rot = Quaternion(math.cos(theta), math.sin(theta), 0.0, 0.0)
    return QMatrix2.diagonal(rot, u * rot * u.inverse())


def unit_complex(theta: float) -> Quaternion:
    return Quaternion(math.cos(theta), math.sin(theta), 0.0, 0.0)


def transvection(x0: Quaternion) -> QMatrix2:
    """Member moving the interior point x0 to the origin."""
    s = math.sqrt(1.0 - x0.norm2())
    return QMatrix2(Quaternion(1 / s), -x0 / s, -x0.conj() / s, Quaternion(1 / s))


def rotator_to_i(n: Quaternion) -> Quaternion:
    """Unit u with u n u^{-1} = i, for a unit imaginary quaternion n."""
    i = Quaternion(0, 1, 0, 0)
    q = Quaternion(1, 0, 0, 0) - i * n
    if q.norm() < 1e-8:  # n = -i: rotate by pi around k
        return Quaternion(0, 0, 0, 1)
    return q / q.norm()


def frame_to_complex(q: Quaternion) -> tuple[Quaternion, complex]:
    """Unit u and the complex representative z with u q u^{-1} = z."""
    v = q.im_norm()
    if v == 0.0:
        return Quaternion(1, 0, 0, 0), complex(q.w, 0.0)
    n = q.im() / v
    u = rotator_to_i(n)
    return u, complex(q.w, v)


def form_value(X: HVector) -> float:
    return herm_form(X, X).w


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture(autouse=True)
def _restore_tolerance():
    from quatisom.config import get_tolerance, set_tolerance
    old = get_tolerance()
    yield
    set_tolerance(old)
