"""Substantial right eigenvalues of Sp(1,1) elements.

The characteristic polynomial of chi(P) factors as
(t - l1)(t - conj(l1))(t - l2)(t - conj(l2)) where each l is real or has
positive imaginary part; l1, l2 are the substantial right eigenvalues.
They are recovered from (tau, rho) either in closed form (branching on
the discriminants) or through the generic quartic root finder, two
deliberately independent routes.

Seven mutually exclusive spectral cases occur:

    i    l1 = l2 = +-1                          (tau, rho) = (+-2, 6)
    ii   l1 = 1, l2 = -1                        (tau, rho) = (0, -2)
    iii  l1 = r, l2 = 1/r, real r != -1, 0, 1   on rho = tau^2 + 2, |tau| > 2
    iv   l1 = +-1, l2 = e^{i theta}             on rho = +-4 tau - 2
    v    l1 = l2 = e^{i theta}                  on rho = tau^2 + 2, |tau| < 2
    vi   l1 = e^{i theta1}, l2 = e^{i theta2}   interior of the lens R1
    vii  l1 = r e^{i theta}, l2 = (1/r) e^{i theta}   above the parabola

Case tags are assigned from the entry-level (tau, rho) position: the
eigenvalues are square-root-sensitive functions of (tau, rho) near the
degeneration locus, so testing them directly against the library epsilon
would disagree with the region decision inside its tolerance band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import resolve
from .errors import ConjugatePairingError, UnrealizableInvariantsError
from .representation import QuarticCoeffs, _conjugate_pairs, quartic_roots

CASE_TAGS = ("i", "ii", "iii", "iv", "v", "vi", "vii")

#: cos^2(theta) below this uses the dedicated tau ~ 0 recovery of r.
_COS2_TINY = 1e-28

#: Pair-level comparisons (equality of eigenvalues, |lambda| = 1, reality)
#: use sqrt(epsilon)-scaled bands, matching the sensitivity of the
#: eigenvalues to the entry-level invariants.
_CASE_BAND_FACTOR = 0.1


def _case_band(tol: float) -> float:
    return _CASE_BAND_FACTOR * math.sqrt(tol)


# ---------------------------------------------------------------------------
# (tau, rho)-plane geometry
# ---------------------------------------------------------------------------

PLANE_LOCATIONS = ("tangency", "parabola_arc", "parabola_outer",
                   "line", "r1", "r2", "unrealizable")


def plane_location(tau: float, rho: float, tol: float | None = None) -> str:
    """Position of (tau, rho) relative to the curves rho = 4|tau| - 2 and
    rho = tau^2 + 2, with tolerance bands of width tol * (1 + tau^2 + |rho|).

    Realizable invariants fill the closed lens R1 = {|tau| <= 2,
    4|tau| - 2 <= rho <= tau^2 + 2}, the region R2 = {rho >= tau^2 + 2},
    and the outer parabola arcs rho = tau^2 + 2 with |tau| > 2; everything
    else is unrealizable.
    """
    e = resolve(tol)
    band = e * (1.0 + tau * tau + abs(rho))
    tau_band = e * (1.0 + abs(tau))
    s2 = rho - (tau * tau + 2.0)
    s1 = rho - (4.0 * abs(tau) - 2.0)
    if abs(s2) <= band:
        if abs(abs(tau) - 2.0) <= tau_band:
            return "tangency"
        return "parabola_arc" if abs(tau) < 2.0 else "parabola_outer"
    if s2 < 0.0:
        if abs(tau) <= 2.0 + tau_band and s1 >= -band:
            return "line" if abs(s1) <= band else "r1"
        return "unrealizable"
    return "r2"


def case_from_invariants(coeffs: QuarticCoeffs, tol: float | None = None) -> str:
    """Spectral case tag of realizable invariants."""
    tau, rho = coeffs
    e = resolve(tol)
    loc = plane_location(tau, rho, e)
    if loc == "tangency":
        return "i"
    if loc == "parabola_arc":
        return "v"
    if loc == "parabola_outer":
        return "iii"
    if loc == "line":
        band = e * (1.0 + tau * tau + abs(rho))
        if abs(tau) <= e * (1.0 + abs(tau)) and abs(rho + 2.0) <= band:
            return "ii"
        return "iv"
    if loc == "r1":
        return "vi"
    if loc == "r2":
        return "vii"
    raise UnrealizableInvariantsError(
        f"unrealizable invariants (tau, rho) = ({tau}, {rho})")


# ---------------------------------------------------------------------------
# Substantial pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubstantialPair:
    """The two substantial right eigenvalues, normalized and ordered.

    Each value is real or has positive imaginary part.  When the moduli
    differ, |lambda1| > |lambda2|; otherwise Re(lambda1) >= Re(lambda2).
    """

    lambda1: complex
    lambda2: complex
    case_tag: str

    def as_tuple(self) -> tuple[complex, complex]:
        return (self.lambda1, self.lambda2)

    def all_roots(self) -> tuple[complex, complex, complex, complex]:
        """The full root multiset {l1, conj(l1), l2, conj(l2)}."""
        return (self.lambda1, self.lambda1.conjugate(),
                self.lambda2, self.lambda2.conjugate())


def _normalize_rep(z: complex, band: float) -> complex:
    if abs(z.imag) <= band * (1.0 + abs(z)):
        return complex(z.real, 0.0)
    if z.imag < 0.0:
        return z.conjugate()
    return z


def _order(l1: complex, l2: complex, band: float) -> tuple[complex, complex]:
    m1, m2 = abs(l1), abs(l2)
    if abs(m1 - m2) > band * (1.0 + m1 + m2):
        return (l1, l2) if m1 > m2 else (l2, l1)
    if l1.real != l2.real:
        return (l1, l2) if l1.real > l2.real else (l2, l1)
    return (l1, l2)


def make_pair(l1: complex, l2: complex, tol: float | None = None,
              case_tag: str | None = None) -> SubstantialPair:
    """Normalize, order and tag a substantial pair."""
    e = resolve(tol)
    band = _case_band(e)
    l1, l2 = _order(_normalize_rep(complex(l1), band), _normalize_rep(complex(l2), band), band)
    if case_tag is None:
        case_tag = classify_case((l1, l2), e)
    return SubstantialPair(l1, l2, case_tag)


def reconstruct_invariants(pair: SubstantialPair | tuple[complex, complex]) -> QuarticCoeffs:
    """(tau, rho) from a pair: tau = Re(l1 + l2),
    rho = |l1|^2 + |l2|^2 + 4 Re(l1) Re(l2)."""
    l1, l2 = pair.as_tuple() if isinstance(pair, SubstantialPair) else pair
    tau = (l1 + l2).real
    rho = abs(l1) ** 2 + abs(l2) ** 2 + 4.0 * l1.real * l2.real
    return QuarticCoeffs(tau, rho)


def classify_case(pair: SubstantialPair | tuple[complex, complex],
                  tol: float | None = None) -> str:
    """Spectral case tag of a normalized pair.

    Works through the reconstructed invariants so that the answer always
    matches the (tau, rho)-plane decision.
    """
    return case_from_invariants(reconstruct_invariants(pair), tol)


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def _clamp_unit(x: float) -> float:
    return max(-1.0, min(1.0, x))


def eigenvalues_closed_form(coeffs: QuarticCoeffs,
                            tol: float | None = None) -> SubstantialPair:
    """Substantial pair in closed form from (tau, rho).

    Below (or on) the parabola with |tau| <= 2 both eigenvalues are unit:
    cos(theta_{1,2}) = (tau +- sqrt(tau^2 + 2 - rho)) / 2.  Otherwise the
    pair is r e^{i theta}, (1/r) e^{i theta} with

        cos^2(theta) = (rho + 2 - sqrt((rho + 2)^2 - 16 tau^2)) / 8,
        r = (|tau| + sqrt(tau^2 - 4 cos^2(theta))) / (2 cos(theta)),

    evaluated in cancellation-free form; theta is reflected to pi - theta
    for negative tau, and near tau = 0 the modulus comes directly from
    rho = r^2 + 1/r^2.  On the outer parabola (|tau| > 2) the formulas
    degenerate cleanly to a real reciprocal pair.  Branching is by the
    sign of the discriminants, so the results are exact roots of the
    floating-point quartic throughout the tolerance bands.
    """
    tau, rho = coeffs
    e = resolve(tol)
    if plane_location(tau, rho, e) == "unrealizable":
        raise UnrealizableInvariantsError(
            f"unrealizable invariants (tau, rho) = ({tau}, {rho})")

    s2 = rho - (tau * tau + 2.0)
    if s2 <= 0.0 and abs(tau) <= 2.0:
        d = math.sqrt(-s2) if s2 < 0.0 else 0.0
        u1 = _clamp_unit((tau + d) / 2.0)
        u2 = _clamp_unit((tau - d) / 2.0)
        lam1 = complex(u1, math.sqrt(max(0.0, 1.0 - u1 * u1)))
        lam2 = complex(u2, math.sqrt(max(0.0, 1.0 - u2 * u2)))
    else:
        disc = (rho + 2.0) ** 2 - 16.0 * tau * tau
        denom = (rho + 2.0) + math.sqrt(max(0.0, disc))
        u = min(1.0, 2.0 * tau * tau / denom)  # cos^2(theta), stable for small tau
        if u <= _COS2_TINY:
            r = math.sqrt((rho + math.sqrt(max(0.0, rho * rho - 4.0))) / 2.0)
            c = 0.0
        else:
            c = math.sqrt(u)
            r = (abs(tau) + math.sqrt(max(0.0, tau * tau - 4.0 * u))) / (2.0 * c)
            if r < 1.0:
                r = 1.0 / r
        s = math.sqrt(max(0.0, 1.0 - u))
        if tau < 0.0:
            c = -c
        lam1 = complex(r * c, r * s)
        lam2 = complex(c / r, s / r)

    return make_pair(lam1, lam2, e, case_tag=case_from_invariants(coeffs, e))


def eigenvalues_oracle(coeffs: QuarticCoeffs,
                       tol: float | None = None) -> SubstantialPair:
    """Substantial pair via the generic quartic root finder.

    Roots are partitioned into conjugate pairs (best of the three
    partitions) and each pair is averaged to its representative.
    Independent of the closed forms.
    """
    e = resolve(tol)
    roots = quartic_roots(coeffs)
    (i, j, k, l), mismatch = _conjugate_pairs(roots)
    if mismatch > _case_band(e) * (1.0 + max(abs(z) for z in roots)):
        raise ConjugatePairingError(
            f"conjugate pairing failed: mismatch {mismatch:.3e} "
            f"for (tau, rho) = ({coeffs.tau}, {coeffs.rho})")
    m = (roots[i] + roots[j].conjugate()) / 2.0
    n = (roots[k] + roots[l].conjugate()) / 2.0
    return make_pair(m, n, e, case_tag=case_from_invariants(coeffs, e))
