"""Elliptic / parabolic / loxodromic classification of Sp(1,1) elements.

The verdict is a function of the trace invariants (tau, rho) except on
the parabola arc rho = tau^2 + 2 with |tau| < 2, where diagonalizability
decides: there P is diagonalizable iff Re(a) = Re(d) and c = conj(b).

The region R1 is implemented as the bounded lens {|tau| <= 2,
4|tau| - 2 <= rho <= tau^2 + 2}: real reciprocal spectra (case iii) sit
on the parabola with |tau| > 2 and are loxodromic, so the unbounded band
reading of R1 would misclassify them.  Every report cross-checks the
region verdict against the spectral-case mapping and the fixed-point
oracle and fails loudly on disagreement.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any

from .config import resolve
from .errors import InconsistencyError, UnrealizableInvariantsError
from .representation import QuarticCoeffs, char_poly_coeffs
from .sp11 import QMatrix2, require_sp11
from .spectrum import (SubstantialPair, eigenvalues_closed_form, plane_location,
                       reconstruct_invariants)


class Region(enum.Enum):
    R1_INTERIOR = "R1_interior"
    R1_LINE_BOUNDARY = "R1_line_boundary"
    PARABOLA_ARC = "parabola_arc"
    TANGENCY_POINT = "tangency_point"
    PARABOLA_OUTER = "parabola_outer"
    R2_INTERIOR = "R2_interior"
    UNREALIZABLE = "unrealizable"


_LOCATION_TO_REGION = {
    "tangency": Region.TANGENCY_POINT,
    "parabola_arc": Region.PARABOLA_ARC,
    "parabola_outer": Region.PARABOLA_OUTER,
    "line": Region.R1_LINE_BOUNDARY,
    "r1": Region.R1_INTERIOR,
    "r2": Region.R2_INTERIOR,
    "unrealizable": Region.UNREALIZABLE,
}

#: Spectral cases compatible with each region (tangency tolerated on the
#: neighbouring line and arc, which meet it).
_REGION_CASES = {
    Region.TANGENCY_POINT: {"i"},
    Region.PARABOLA_ARC: {"v", "i"},
    Region.PARABOLA_OUTER: {"iii"},
    Region.R1_LINE_BOUNDARY: {"ii", "iv", "i"},
    Region.R1_INTERIOR: {"vi"},
    Region.R2_INTERIOR: {"vii"},
}

VERDICTS = ("identity", "minus_identity", "elliptic", "parabolic", "loxodromic")


def region_of(coeffs: QuarticCoeffs, tol: float | None = None) -> Region:
    """Region of the (tau, rho)-plane, with tolerance bands on the curves."""
    return _LOCATION_TO_REGION[plane_location(coeffs.tau, coeffs.rho, tol)]


def structural_diag_test(P: QMatrix2, tol: float | None = None) -> bool:
    """Entrywise diagonalizability test Re(a) = Re(d) and c = conj(b).

    Valid precisely on the parabola arc (it is only consulted there);
    uses the library epsilon against the entry magnitudes.
    """
    require_sp11(P, tol)
    e = resolve(tol)
    re_ok = abs(P.a.w - P.d.w) <= e * (1.0 + abs(P.a.w) + abs(P.d.w))
    cb = P.c - P.b.conj()
    cb_ok = cb.norm() <= e * (1.0 + P.c.norm() + P.b.norm())
    return re_ok and cb_ok


def is_plus_minus_identity(P: QMatrix2, tol: float | None = None) -> int:
    """+1 / -1 if P is the identity / its negative to tolerance, else 0."""
    e = resolve(tol)
    for sign, ref in ((1, QMatrix2.identity()), (-1, -QMatrix2.identity())):
        if all((p - q).norm() <= e * (1.0 + p.norm())
               for p, q in zip(P.entries(), ref.entries())):
            return sign
    return 0


@dataclass(frozen=True)
class IsometryClass:
    """Verdict tag plus geometric normal-form parameters.

    normal_form contents by tag:
      elliptic    {"alpha", "beta"}: x = u + v j maps to e^{i alpha} u + e^{i beta} v j
      parabolic   {"lambda": [re, im], "subtype"}: Siegel map xi -> lam xi lam^-1 + lam^-1
      loxodromic  {"r", "theta", "subtype"}: Siegel map xi -> r^2 e^{i theta} xi e^{-i theta}
    """

    tag: str
    normal_form: dict[str, Any]

    def to_json(self) -> dict[str, Any]:
        return {"tag": self.tag, "normal_form": self.normal_form}


@dataclass(frozen=True)
class ClassificationReport:
    verdict: IsometryClass
    tau: float
    rho: float
    region: Region
    eigenvalues: SubstantialPair
    diagonalizable: bool
    consistency: tuple[tuple[str, bool], ...]

    @property
    def is_consistent(self) -> bool:
        return all(ok for _, ok in self.consistency)

    def to_json(self) -> dict[str, Any]:
        l1, l2 = self.eigenvalues.as_tuple()
        return {
            "verdict": self.verdict.tag,
            "tau": self.tau,
            "rho": self.rho,
            "region": self.region.value,
            "eigenvalues": [[l1.real, l1.imag], [l2.real, l2.imag]],
            "case": self.eigenvalues.case_tag,
            "diagonalizable": self.diagonalizable,
            "normal_form": self.verdict.normal_form,
            "consistency": [{"check": name, "pass": ok} for name, ok in self.consistency],
        }


def _arg_in_upper(z: complex) -> float:
    """Argument in [0, pi] of a normalized representative."""
    import math
    if z.imag == 0.0:
        return 0.0 if z.real >= 0.0 else math.pi
    return math.atan2(z.imag, z.real)


def _normal_form(tag: str, pair: SubstantialPair, band: float,
                 P: QMatrix2 | None = None, tol: float | None = None) -> dict[str, Any]:
    import math
    l1, l2 = pair.as_tuple()
    if tag in ("identity", "minus_identity"):
        return {"type": tag}
    if tag == "elliptic":
        # the first rotation angle belongs to the positive eigenline; the
        # eigenvalue pair alone cannot say which that is
        if P is not None and abs(l1 - l2) > band:
            from . import action
            pos = action.eigenvalue_on_positive_line(P, (l1, l2), tol)
            if pos == l2:
                l1, l2 = l2, l1
        t1, t2 = _arg_in_upper(l1), _arg_in_upper(l2)
        return {"type": "elliptic", "alpha": t1 - t2, "beta": t1 + t2}
    if tag == "parabolic":
        subtype = "translation" if abs(l1.imag) <= band * (1.0 + abs(l1)) else "screw"
        return {"type": "parabolic", "lambda": [l1.real, l1.imag], "subtype": subtype}
    # loxodromic
    r, theta = abs(l1), _arg_in_upper(l1)
    subtype = "homothety" if min(theta, math.pi - theta) <= band else "screw"
    return {"type": "loxodromic", "r": r, "theta": theta, "subtype": subtype}


def _verdict_from_region(region: Region, diagonalizable: bool) -> str:
    if region is Region.TANGENCY_POINT:
        return "parabolic"
    if region in (Region.R1_INTERIOR, Region.R1_LINE_BOUNDARY):
        return "elliptic"
    if region is Region.PARABOLA_ARC:
        return "elliptic" if diagonalizable else "parabolic"
    return "loxodromic"  # PARABOLA_OUTER or R2_INTERIOR


def _verdict_from_case(case: str, diagonalizable: bool, pm: int) -> str:
    """Expected verdict from the spectral case (P != +-I already handled:
    for case i the diagonalizable members are exactly +-I)."""
    if case in ("ii", "iv", "vi"):
        return "elliptic"
    if case in ("iii", "vii"):
        return "loxodromic"
    if case == "i":
        return "identity" if pm > 0 else ("minus_identity" if pm < 0 else "parabolic")
    return "elliptic" if diagonalizable else "parabolic"  # case v


def classify(P: QMatrix2, tol: float | None = None,
             cross_check_fixed_points: bool = True) -> ClassificationReport:
    """Full classification with cross-checked evidence.

    Decision order: +-I detection, then the region of (tau, rho); the
    structural test is consulted only on the parabola arc.  The report
    carries the eigenvalues, normal-form parameters and the outcome of
    every cross-check; disagreement raises
    :class:`~quatisom.errors.InconsistencyError` with the evidence.
    """
    import math

    from . import action  # deferred: action imports this module's types

    e = resolve(tol)
    require_sp11(P, tol)
    coeffs = char_poly_coeffs(P, tol)
    region = region_of(coeffs, e)
    if region is Region.UNREALIZABLE:
        raise UnrealizableInvariantsError(
            f"unrealizable invariants (tau, rho) = ({coeffs.tau}, {coeffs.rho})")
    pair = eigenvalues_closed_form(coeffs, e)
    case = pair.case_tag
    band = 0.1 * math.sqrt(e)

    pm = is_plus_minus_identity(P, e)
    on_arc = region is Region.PARABOLA_ARC
    structural = structural_diag_test(P, tol) if region in (
        Region.PARABOLA_ARC, Region.TANGENCY_POINT) else None

    if pm > 0:
        tag = "identity"
    elif pm < 0:
        tag = "minus_identity"
    else:
        tag = _verdict_from_region(region, bool(structural) if on_arc else False)

    if case in ("ii", "iii", "iv", "vi", "vii"):
        diagonalizable = True
    elif case == "v":
        diagonalizable = bool(structural)
    else:  # case i: diagonalizable members are exactly +-I
        diagonalizable = pm != 0

    verdict = IsometryClass(tag, _normal_form(tag, pair, band, P, tol))

    checks: list[tuple[str, bool]] = []
    expected = _verdict_from_case(case, diagonalizable, pm)
    checks.append(("eigen_case_mapping", expected == tag))
    checks.append(("case_region_coherence", case in _REGION_CASES.get(region, set())))
    recon = reconstruct_invariants(pair)
    scale = 1.0 + coeffs.tau ** 2 + abs(coeffs.rho)
    checks.append(("invariant_reconstruction",
                   abs(recon.tau - coeffs.tau) <= 1e-8 * scale
                   and abs(recon.rho - coeffs.rho) <= 1e-8 * scale))
    if cross_check_fixed_points and pm == 0:
        try:
            fp_tag = action.classify_by_fixed_points(P, tol)
            checks.append(("fixed_point_oracle", fp_tag == tag))
        except Exception as exc:  # noqa: BLE001 - recorded as evidence
            checks.append((f"fixed_point_oracle[{type(exc).__name__}: {exc}]", False))

    report = ClassificationReport(
        verdict=verdict, tau=coeffs.tau, rho=coeffs.rho, region=region,
        eigenvalues=pair, diagonalizable=diagonalizable,
        consistency=tuple(checks),
    )
    if not report.is_consistent:
        failing = [name for name, ok in checks if not ok]
        raise InconsistencyError(
            f"classification cross-checks failed: {failing}", report.to_json())
    return report
