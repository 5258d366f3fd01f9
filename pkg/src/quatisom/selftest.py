"""Named invariant checks runnable as a self-test battery.

Each check draws its own seeded randomness, so the battery is
reproducible; the CLI command ``selftest`` runs all of them and prints a
pass/fail table.  Trial counts scale with the requested budget.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

import numpy as np

from . import action, representation, sp11, spectrum
from .classify import Region, classify as classify_element, region_of
from .config import _DEFAULT as _DEFAULT_TOL
from .config import resolve
from .quaternion import Quaternion
from .sp11 import HVector, QMatrix2, VectorSign


def _rand_quaternion(rng: np.random.Generator, scale: float = 1.0) -> Quaternion:
    return Quaternion(*(scale * rng.normal(size=4)))


def _rand_matrix(rng: np.random.Generator) -> QMatrix2:
    return QMatrix2(*(_rand_quaternion(rng) for _ in range(4)))


def _member(i: int) -> QMatrix2:
    return sp11.sample_sp11(i, ("generic", "boundary", "near-parabolic")[i % 3])


def _ball_point(rng: np.random.Generator) -> Quaternion:
    v = rng.normal(size=4)
    v *= rng.uniform(0.0, 0.95) / np.linalg.norm(v)
    return Quaternion(*v)


CheckResult = tuple[bool, str]


def _thr(base: float, tol: float) -> float:
    """Check threshold: the documented default, rescaled by any tolerance
    override (so a deliberately unattainable override reports failures)."""
    return base * (tol / _DEFAULT_TOL)


def check_norm_multiplicative(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        p, q = _rand_quaternion(rng), _rand_quaternion(rng)
        worst = max(worst, abs((p * q).norm() - p.norm() * q.norm())
                    / (1.0 + p.norm() * q.norm()))
    return worst <= _thr(1e-12, tol), f"max rel deviation {worst:.2e}"


def check_conj_antihomomorphism(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        p, q = _rand_quaternion(rng), _rand_quaternion(rng)
        worst = max(worst, ((p * q).conj() - q.conj() * p.conj()).norm()
                    / (1.0 + (p * q).norm()))
    return worst <= _thr(1e-12, tol), f"max rel deviation {worst:.2e}"


def check_similarity_invariants(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        q = _rand_quaternion(rng)
        u = _rand_quaternion(rng)
        if u.norm() < 1e-6:
            continue
        u = u / u.norm()
        s = u.inverse() * q * u
        r1, n1 = q.similarity_invariants()
        r2, n2 = s.similarity_invariants()
        worst = max(worst, abs(r1 - r2) + abs(n1 - n2),
                    abs(q.canonical_rep() - s.canonical_rep()))
    return worst <= _thr(1e-8, tol), f"max deviation {worst:.2e}"


def check_decompose_roundtrip(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    for _ in range(trials):
        q = _rand_quaternion(rng)
        a, b = q.complex_decompose()
        if Quaternion.from_complex_pair(a, b) != q:
            return False, f"round trip failed for {q}"
    return True, "bit-exact"


def check_chi_homomorphism(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        P, Q = _rand_matrix(rng), _rand_matrix(rng)
        lhs = representation.chi(P @ Q)
        rhs = representation.chi(P) @ representation.chi(Q)
        scale = 1.0 + float(np.abs(rhs).max())
        worst = max(worst, float(np.abs(lhs - rhs).max()) / scale)
        adj = float(np.abs(representation.chi(P.adjoint())
                           - representation.chi(P).conj().T).max())
        worst = max(worst, adj / scale)
    return worst <= _thr(1e-10, tol), f"max rel deviation {worst:.2e}"


def check_chi_det_nonnegative(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst_im, worst_re = 0.0, 0.0
    for _ in range(trials):
        d = complex(np.linalg.det(representation.chi(_rand_matrix(rng))))
        scale = 1.0 + abs(d)
        worst_im = max(worst_im, abs(d.imag) / scale)
        worst_re = max(worst_re, -d.real / scale)
    ok = worst_im <= _thr(1e-10, tol) and worst_re <= _thr(1e-10, tol)
    return ok, f"max |Im|/scale {worst_im:.2e}, max -Re/scale {worst_re:.2e}"


def check_charpoly_coefficients(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for i in range(trials):
        P = _member(i)
        tau, rho = representation.char_poly_coeffs(P)
        got = np.poly(representation.chi(P))
        want = np.array([1.0, -2.0 * tau, rho, -2.0 * tau, 1.0])
        worst = max(worst, float(np.abs(got - want).max()) / (1.0 + abs(rho)))
    return worst <= _thr(1e-9, tol), f"max rel deviation {worst:.2e}"


def check_root_symmetries(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for i in range(trials):
        coeffs = representation.char_poly_coeffs(_member(i))
        roots = representation.quartic_roots(coeffs)
        for z in roots:
            recip = 1.0 / z.conjugate()
            worst = max(worst, min(abs(recip - w) for w in roots) / (1.0 + abs(recip)))
    return worst <= _thr(1e-8, tol), f"max reciprocal-conjugate gap {worst:.2e}"


def check_resultant_identity(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        tau = float(rng.uniform(-5, 5))
        rho = float(rng.uniform(-10, 30))
        coeffs = representation.QuarticCoeffs(tau, rho)
        lhs = representation.sylvester_resultant(coeffs)
        f1, f2, f3 = representation.discriminant_factors(coeffs)
        rhs = representation.RESULTANT_SCALE * f1 * f2 * f3 * f3
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(lhs) + abs(rhs)))
    return worst <= _thr(1e-8, tol), f"max rel deviation {worst:.2e}"


def check_form_preservation(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for i in range(trials):
        P = _member(i)
        X = HVector(_rand_quaternion(rng), _rand_quaternion(rng))
        Y = HVector(_rand_quaternion(rng), _rand_quaternion(rng))
        lhs = sp11.herm_form(P.apply(X), P.apply(Y))
        rhs = sp11.herm_form(X, Y)
        worst = max(worst, (lhs - rhs).norm() / (1.0 + rhs.norm() + P.entry_scale()))
    return worst <= _thr(1e-9, tol), f"max rel deviation {worst:.2e}"


def check_group_closure(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    for i in range(trials):
        P, Q = _member(2 * i), _member(2 * i + 1)
        if not sp11.is_sp11(P @ Q) or not sp11.is_sp11(sp11.sp11_inverse(P)):
            return False, f"closure failed at trial {i}"
    return True, "products and inverses stay in the group"


def check_orthogonal_complements(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    for _ in range(trials):
        X = HVector(_rand_quaternion(rng), _rand_quaternion(rng))
        try:
            s = sp11.vector_sign(X)
        except ValueError:
            continue
        if s is VectorSign.ISOTROPIC:
            continue
        Y0 = HVector(_rand_quaternion(rng), _rand_quaternion(rng))
        gram = sp11.herm_form(X, X).w
        coef = sp11.herm_form(X, Y0) * (1.0 / gram)
        Y = HVector(Y0.x1 - X.x1 * coef, Y0.x2 - X.x2 * coef)
        if Y.norm2() < 1e-12:
            continue
        t = sp11.vector_sign(Y, tol=1e-7)
        if s is VectorSign.NEGATIVE and t is VectorSign.NEGATIVE:
            return False, "negative vector with negative orthogonal complement"
        if s is VectorSign.POSITIVE and t is VectorSign.POSITIVE:
            return False, "positive vector with positive orthogonal complement"
    return True, "complements have the opposite sign"


def check_sampler_contract(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for i in range(trials):
        kind = sp11.SAMPLER_KINDS[i % 3]
        P = sp11.sample_sp11(i, kind)
        if P.to_json() != sp11.sample_sp11(i, kind).to_json():
            return False, f"non-deterministic at seed {i}"
        worst = max(worst, sp11.membership_residual(P))
        coeffs = representation.char_poly_coeffs(P)
        if region_of(coeffs) is Region.UNREALIZABLE:
            return False, f"sample {i} has unrealizable invariants"
    return worst <= _thr(1e-12, tol), f"max membership residual {worst:.2e}"


def check_eigenvalue_routes_agree(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for i in range(trials):
        coeffs = representation.char_poly_coeffs(_member(i))
        pc = spectrum.eigenvalues_closed_form(coeffs)
        po = spectrum.eigenvalues_oracle(coeffs)
        if pc.case_tag != po.case_tag:
            return False, f"case tags differ at trial {i}"
        worst = max(worst, abs(pc.lambda1 - po.lambda1), abs(pc.lambda2 - po.lambda2))
    return worst <= _thr(1e-8, tol), f"max eigenvalue deviation {worst:.2e}"


def check_invariant_reconstruction(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for i in range(trials):
        coeffs = representation.char_poly_coeffs(_member(i))
        recon = spectrum.reconstruct_invariants(spectrum.eigenvalues_closed_form(coeffs))
        scale = 1.0 + coeffs.tau ** 2 + abs(coeffs.rho)
        worst = max(worst, abs(recon.tau - coeffs.tau) / scale,
                    abs(recon.rho - coeffs.rho) / scale)
    return worst <= _thr(1e-9, tol), f"max rel deviation {worst:.2e}"


def check_verdict_invariance(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    for i in range(trials):
        P = _member(i)
        Q = sp11.sample_sp11(10 ** 6 + i, "boundary") @ sp11.hyperbolic_boost(float(rng.uniform(0, 1)))
        base = classify_element(P, cross_check_fixed_points=False).verdict.tag
        conj = classify_element(Q @ P @ sp11.sp11_inverse(Q),
                                 cross_check_fixed_points=False).verdict.tag
        inv = classify_element(sp11.sp11_inverse(P),
                                cross_check_fixed_points=False).verdict.tag
        if conj != base or inv != base:
            return False, f"verdict changed under conjugation/inverse at trial {i}"
    return True, "verdicts stable under conjugation and inverse"


def check_power_coherence(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    for i in range(trials):
        P = _member(i)
        base = classify_element(P, cross_check_fixed_points=False).verdict.tag
        sq = classify_element(P @ P, cross_check_fixed_points=False).verdict.tag
        if base == "loxodromic" and sq != "loxodromic":
            return False, f"loxodromic square became {sq}"
        if base == "elliptic" and sq not in ("elliptic", "identity", "minus_identity"):
            return False, f"elliptic square became {sq}"
    return True, "squares stay in class"


def check_triple_agreement(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    for i in range(trials):
        P = _member(i)
        rep = classify_element(P)  # raises InconsistencyError on disagreement
        if not rep.is_consistent:
            return False, f"inconsistent report at trial {i}"
    return True, "region, spectral case and fixed points agree"


def check_ball_preservation(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for i in range(trials):
        P = _member(i)
        x = _ball_point(rng)
        y = action.mobius_apply(P, x)
        worst = max(worst, y.norm() - 1.0)
        u = _rand_quaternion(rng)
        if u.norm() > 1e-6:
            b = action.mobius_apply(P, u / u.norm())
            worst = max(worst, abs(b.norm() - 1.0))
    return worst <= _thr(1e-9, tol), f"max ball-norm excess {worst:.2e}"


def check_action_composition(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for i in range(trials):
        P, Q = _member(2 * i), _member(2 * i + 1)
        x = _ball_point(rng)
        lhs = action.mobius_apply(P @ Q, x)
        rhs = action.mobius_apply(P, action.mobius_apply(Q, x))
        worst = max(worst, (lhs - rhs).norm())
    return worst <= _thr(1e-8, tol), f"max composition gap {worst:.2e}"


def check_fixed_point_residuals(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for i in range(trials):
        P = _member(i)
        for p in action.fixed_points(P).points:
            if p.x is None or p.location == "exterior":
                continue
            worst = max(worst, (action.mobius_apply(P, p.x) - p.x).norm())
    return worst <= _thr(1e-8, tol), f"max Möbius residual {worst:.2e}"


def check_eigenvector_isotropy(trials: int, tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for i in range(trials):
        P = _member(i)
        rep = classify_element(P, cross_check_fixed_points=False)
        fps = action.fixed_points(P)
        if rep.verdict.tag == "loxodromic":
            for p in fps.points:
                X = p.projective
                worst = max(worst, abs(sp11.herm_form(X, X).w) / X.norm2())
        elif rep.verdict.tag == "elliptic" and rep.eigenvalues.case_tag in ("ii", "iv", "vi"):
            pts = fps.points
            for a in range(len(pts)):
                for b in range(a + 1, len(pts)):
                    g = sp11.herm_form(pts[a].projective, pts[b].projective)
                    scale = math.sqrt(pts[a].projective.norm2() * pts[b].projective.norm2())
                    worst = max(worst, g.norm() / scale)
    return worst <= _thr(1e-8, tol), f"max isotropy/orthogonality defect {worst:.2e}"


CHECKS: tuple[tuple[str, Callable[[int, float, np.random.Generator], CheckResult]], ...] = (
    ("quaternion.norm_multiplicative", check_norm_multiplicative),
    ("quaternion.conj_antihomomorphism", check_conj_antihomomorphism),
    ("quaternion.similarity_invariants", check_similarity_invariants),
    ("quaternion.decompose_roundtrip", check_decompose_roundtrip),
    ("representation.chi_homomorphism", check_chi_homomorphism),
    ("representation.chi_det_nonnegative", check_chi_det_nonnegative),
    ("representation.charpoly_coefficients", check_charpoly_coefficients),
    ("representation.root_symmetries", check_root_symmetries),
    ("representation.resultant_identity", check_resultant_identity),
    ("sp11.form_preservation", check_form_preservation),
    ("sp11.group_closure", check_group_closure),
    ("sp11.orthogonal_complements", check_orthogonal_complements),
    ("sp11.sampler_contract", check_sampler_contract),
    ("spectrum.eigenvalue_routes_agree", check_eigenvalue_routes_agree),
    ("spectrum.invariant_reconstruction", check_invariant_reconstruction),
    ("classify.verdict_invariance", check_verdict_invariance),
    ("classify.power_coherence", check_power_coherence),
    ("classify.triple_agreement", check_triple_agreement),
    ("action.ball_preservation", check_ball_preservation),
    ("action.composition", check_action_composition),
    ("action.fixed_point_residuals", check_fixed_point_residuals),
    ("action.eigenvector_isotropy", check_eigenvector_isotropy),
)


def run(trials: int = 200, tol: float | None = None,
        names: Iterable[str] | None = None) -> list[tuple[str, bool, str]]:
    """Run the battery; returns (name, passed, detail) rows."""
    e = resolve(tol)
    wanted = set(names) if names is not None else None
    rows = []
    for idx, (name, fn) in enumerate(CHECKS):
        if wanted is not None and name not in wanted:
            continue
        rng = np.random.default_rng(10_000 + idx)
        try:
            ok, detail = fn(trials, e, rng)
        except Exception as exc:  # noqa: BLE001 - a failing check is a result
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        rows.append((name, ok, detail))
    return rows
