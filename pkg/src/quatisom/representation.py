"""Complex representation of quaternionic matrices and quartic machinery.

A quaternionic matrix P decomposes entrywise as P = A + B j with complex
A, B; its complex representation is the block matrix

    chi(P) = [[A, B], [-conj(B), conj(A)]],

an injective homomorphism of real algebras.  For P in Sp(1,1) the
characteristic polynomial of chi(P) is palindromic,

    f(t) = t^4 - 2 tau t^3 + rho t^2 - 2 tau t + 1,

with tau = Re(a + d) and rho = 2 + |c - conj(b)|^2 + 4 Re(a) Re(d).
This module also provides a generic quartic root finder (used as an
oracle, independent of any closed form), the 7x7 Sylvester resultant of
f and f', and its discriminant factors.
"""

from __future__ import annotations

import cmath
import math
from typing import NamedTuple, Sequence

import numpy as np

from .config import resolve
from .errors import RootConvergenceError
from .quaternion import Quaternion
from .sp11 import QMatrix2, require_sp11

#: Residual target for quartic roots: |f(z)| <= RTOL * (1 + |z|)^4.
ROOT_RESIDUAL_RTOL = 1e-9

#: Two roots within this distance count as repeated (coupled with
#: RESULTANT_ZERO_RTOL below at compatible scales).
ROOT_EQUAL_TOL = 1e-7

#: |resultant| <= RESULTANT_ZERO_RTOL * (1 + tau^2 + rho^2)^2 counts as zero.
RESULTANT_ZERO_RTOL = 1e-6

#: det Sylvester(f, f') = RESULTANT_SCALE * (rho + 4 tau + 2)(rho - 4 tau + 2)(rho - tau^2 - 2)^2,
#: confirmed against the resultant product formula at (0,0) -> 256 and (0,1) -> 144.
RESULTANT_SCALE = 16.0

_DK_MAX_ITER = 200


class QuarticCoeffs(NamedTuple):
    """Trace invariants (tau, rho); they determine f = t^4 - 2 tau t^3 + rho t^2 - 2 tau t + 1."""

    tau: float
    rho: float


def chi(P: QMatrix2) -> np.ndarray:
    """4x4 complex representation [[A, B], [-conj(B), conj(A)]]."""
    a1, a2 = P.a.complex_decompose()
    b1, b2 = P.b.complex_decompose()
    c1, c2 = P.c.complex_decompose()
    d1, d2 = P.d.complex_decompose()
    return np.array([
        [a1, b1, a2, b2],
        [c1, d1, c2, d2],
        [-a2.conjugate(), -b2.conjugate(), a1.conjugate(), b1.conjugate()],
        [-c2.conjugate(), -d2.conjugate(), c1.conjugate(), d1.conjugate()],
    ], dtype=complex)


def chi_vector(X1: Quaternion, X2: Quaternion) -> np.ndarray:
    """First chi-column of a quaternionic column vector (X1, X2)."""
    a1, b1 = X1.complex_decompose()
    a2, b2 = X2.complex_decompose()
    return np.array([a1, a2, -b1.conjugate(), -b2.conjugate()], dtype=complex)


def vector_from_chi_column(xi: Sequence[complex]) -> tuple[Quaternion, Quaternion]:
    """Inverse of :func:`chi_vector`.

    For an eigenvector xi of chi(P) with eigenvalue lam, the quaternionic
    vector X = (xi1 - conj(xi3) j, xi2 - conj(xi4) j) satisfies P X = X lam,
    and chi of X has first column xi.
    """
    x1, x2, x3, x4 = (complex(v) for v in xi)
    return (Quaternion.from_complex_pair(x1, -x3.conjugate()),
            Quaternion.from_complex_pair(x2, -x4.conjugate()))


def char_poly_coeffs(P: QMatrix2, tol: float | None = None) -> QuarticCoeffs:
    """Trace invariants (tau, rho) of a member of Sp(1,1).

    The closed forms below are proved only under the membership
    conditions, so non-members are refused.
    """
    require_sp11(P, tol)
    tau = P.a.w + P.d.w
    rho = 2.0 + (P.c - P.b.conj()).norm2() + 4.0 * P.a.w * P.d.w
    return QuarticCoeffs(tau, rho)


def quartic_coefficients(coeffs: QuarticCoeffs) -> list[float]:
    """Monic coefficient list [1, -2 tau, rho, -2 tau, 1]."""
    tau, rho = coeffs
    return [1.0, -2.0 * tau, rho, -2.0 * tau, 1.0]


def quartic_eval(coeffs: QuarticCoeffs, t: complex) -> complex:
    r = 0j
    for c in quartic_coefficients(coeffs):
        r = r * t + c
    return r


def _dk_iterate(co: list[float]) -> tuple[list[complex], float]:
    """Durand-Kerner simultaneous iteration with a deterministic,
    conjugate-symmetric ring initialization."""
    def f(z: complex) -> complex:
        r = 0j
        for c in co:
            r = r * z + c
        return r

    radius = 1.0 + max(abs(c) for c in co[1:])
    angles = (math.pi / 8, -math.pi / 8, math.pi - math.pi / 8, math.pi / 8 - math.pi)
    z = [radius * cmath.exp(1j * a) for a in angles]
    for _ in range(_DK_MAX_ITER):
        moved = 0.0
        nxt = list(z)
        for i in range(4):
            den = 1.0 + 0j
            for j in range(4):
                if j != i:
                    den *= z[i] - z[j]
            if den == 0:
                den = 1e-300
            step = f(z[i]) / den
            nxt[i] = z[i] - step
            moved = max(moved, abs(step))
        z = nxt
        if moved <= 1e-15 * (1.0 + max(abs(w) for w in z)):
            break
    residual = max(abs(f(w)) / (1.0 + abs(w)) ** 4 for w in z)
    return z, residual


def _conjugate_pairs(roots: Sequence[complex]) -> tuple[tuple[int, int, int, int], float]:
    """Best partition of four roots into two conjugate pairs.

    Returns indices (i, j, k, l) meaning pairs (i, j) and (k, l), and the
    total pairing mismatch sum |z_i - conj(z_j)| + |z_k - conj(z_l)|.
    """
    partitions = ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2))
    best, best_cost = partitions[0], math.inf
    for p in partitions:
        i, j, k, l = p
        cost = abs(roots[i] - roots[j].conjugate()) + abs(roots[k] - roots[l].conjugate())
        if cost < best_cost:
            best, best_cost = p, cost
    return best, best_cost


def _symmetrize(roots: Sequence[complex]) -> list[complex]:
    """Replace the root multiset by the nearest conjugation-closed one.

    Rounding breaks the exact conjugate symmetry of the iteration at
    multiple roots; pairing and averaging restores it without moving any
    root by more than the pairing mismatch.  Genuinely real roots are
    conjugation-closed on their own and must not be merged (a generic
    quartic may have distinct real roots).
    """
    flat = [complex(z.real, 0.0) if abs(z.imag) <= 1e-9 * (1.0 + abs(z)) else z
            for z in roots]
    cplx = [z for z in flat if z.imag != 0.0]
    reals = [z for z in flat if z.imag == 0.0]
    if len(cplx) == 4:
        (i, j, k, l), _ = _conjugate_pairs(cplx)
        m = (cplx[i] + cplx[j].conjugate()) / 2.0
        n = (cplx[k] + cplx[l].conjugate()) / 2.0
        return [m, m.conjugate(), n, n.conjugate()]
    if len(cplx) == 2:
        m = (cplx[0] + cplx[1].conjugate()) / 2.0
        return reals + [m, m.conjugate()]
    if not cplx:
        return reals
    # an asymmetric stall cluster: pair greedily without zeroing
    (i, j, k, l), _ = _conjugate_pairs(flat)
    m = (flat[i] + flat[j].conjugate()) / 2.0
    n = (flat[k] + flat[l].conjugate()) / 2.0
    return [m, m.conjugate(), n, n.conjugate()]


def quartic_roots(coeffs: QuarticCoeffs,
                  residual_rtol: float | None = None) -> tuple[complex, complex, complex, complex]:
    """All four roots of f, by simultaneous iteration.

    The output multiset is closed under complex conjugation and each root
    satisfies |f(z)| <= rtol * (1 + |z|)^4.  Falls back to the
    companion-matrix QR method if the iteration stalls; raises
    :class:`RootConvergenceError` carrying the best residual if both fail.
    """
    rtol = ROOT_RESIDUAL_RTOL if residual_rtol is None else residual_rtol
    co = quartic_coefficients(coeffs)

    def total_residual(roots: Sequence[complex]) -> float:
        return max(abs(quartic_eval(coeffs, z)) / (1.0 + abs(z)) ** 4 for z in roots)

    roots, _ = _dk_iterate(co)
    roots = _symmetrize(roots)
    res = total_residual(roots)
    if res <= rtol:
        return tuple(roots)

    fallback = _symmetrize(list(np.roots(co)))
    res_fb = total_residual(fallback)
    if res_fb <= rtol:
        return tuple(fallback)

    best = min(res, res_fb)
    raise RootConvergenceError(
        f"quartic root iteration did not reach residual {rtol:.1e} "
        f"(best {best:.3e}) for (tau, rho) = ({coeffs.tau}, {coeffs.rho})", best)


def sylvester_matrix(coeffs: QuarticCoeffs) -> np.ndarray:
    """7x7 Sylvester matrix of f and f'."""
    f = quartic_coefficients(coeffs)
    fp = [4.0, -6.0 * coeffs.tau, 2.0 * coeffs.rho, -2.0 * coeffs.tau]
    M = np.zeros((7, 7))
    for i in range(3):
        M[i, i:i + 5] = f
    for i in range(4):
        M[3 + i, i:i + 4] = fp
    return M

def sylvester_resultant(coeffs: QuarticCoeffs) -> float:
    """Determinant of the 7x7 Sylvester matrix of f and f'.

    Vanishes exactly when f has a repeated root.  Computed by plain
    partial-pivot elimination; n = 7 needs no structure exploitation.
    """
    M = [list(row) for row in sylvester_matrix(coeffs)]
    det = 1.0
    for k in range(7):
        p = max(range(k, 7), key=lambda i: abs(M[i][k]))
        if M[p][k] == 0.0:
            return 0.0
        if p != k:
            M[k], M[p] = M[p], M[k]
            det = -det
        pivot = M[k][k]
        det *= pivot
        for i in range(k + 1, 7):
            factor = M[i][k] / pivot
            if factor != 0.0:
                for j in range(k, 7):
                    M[i][j] -= factor * M[k][j]
    return det


def discriminant_factors(coeffs: QuarticCoeffs) -> tuple[float, float, float]:
    """(rho + 4 tau + 2, rho - 4 tau + 2, rho - tau^2 - 2).

    The resultant equals RESULTANT_SCALE times the product of the first
    two factors and the square of the third.
    """
    tau, rho = coeffs
    return (rho + 4.0 * tau + 2.0, rho - 4.0 * tau + 2.0, rho - tau * tau - 2.0)


def resultant_is_zero(coeffs: QuarticCoeffs) -> bool:
    scale = (1.0 + coeffs.tau ** 2 + coeffs.rho ** 2) ** 2
    return abs(sylvester_resultant(coeffs)) <= RESULTANT_ZERO_RTOL * scale


def has_repeated_root(coeffs: QuarticCoeffs) -> bool:
    roots = quartic_roots(coeffs)
    gap = min(abs(roots[i] - roots[j]) for i in range(4) for j in range(i + 1, 4))
    return gap <= ROOT_EQUAL_TOL
