"""Acceptance criteria.

Each test evaluates one criterion at its stated tolerance, prints a
single PASS/FAIL line (run with -s to see them), and asserts.  Seeded
sampling makes every run identical.
"""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from quatisom import (QMatrix2, Quaternion, classify, classify_by_fixed_points,
                      fixed_points, hyperbolic_boost, is_sp11, mobius_apply,
                      sample_sp11, sp11_inverse)
from quatisom.classify import Region
from quatisom.representation import (QuarticCoeffs, RESULTANT_SCALE,
                                     char_poly_coeffs, chi, discriminant_factors,
                                     quartic_coefficients, sylvester_resultant)
from quatisom.sp11 import HVector, herm_form
from quatisom.spectrum import eigenvalues_closed_form, eigenvalues_oracle

from conftest import (heisenberg_translation, moderate_member, rand_ball_point,
                      rand_quaternion, unit_complex, vertex_parabolic)

MIX = ("generic", "boundary", "near-parabolic")


def _sample(i: int) -> QMatrix2:
    return sample_sp11(i, MIX[i % 3])


def _report(num: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num} [{name}]: {status}" + (f"  ({detail})" if detail else ""))
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def _best_time(fn, reps: int = 30) -> float:
    fn()  # warm-up
    best = math.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def test_criterion_1_vertex_example():
    P = vertex_parabolic()
    ok = is_sp11(P)
    co = char_poly_coeffs(P)
    ok &= abs(co.tau) <= 1e-12 and abs(co.rho - 2.0) <= 1e-12
    rep = classify(P)
    ok &= rep.verdict.tag == "parabolic"
    ok &= rep.verdict.normal_form["lambda"] == [0.0, 1.0]
    fps = fixed_points(P)
    ok &= fps.ball_count == 1 and len(fps.boundary()) == 1
    x = fps.boundary()[0].x
    ok &= (x - Quaternion(-1)).norm() <= 1e-8
    ok &= (mobius_apply(P, x) - x).norm() <= 1e-8
    elapsed = _best_time(lambda: classify(P))
    ok &= elapsed < 1e-3
    _report(1, "vertex parabolic example", ok, f"classify takes {elapsed * 1e3:.3f} ms")


def test_criterion_2_tangency_and_identities():
    T = heisenberg_translation()
    rep = classify(T)
    ok = (rep.tau, rep.rho) == (2.0, 6.0)
    ok &= rep.verdict.tag == "parabolic" and rep.region is Region.TANGENCY_POINT
    ok &= classify(QMatrix2.identity()).verdict.tag == "identity"
    ok &= classify(-QMatrix2.identity()).verdict.tag == "minus_identity"
    elapsed = max(_best_time(lambda: classify(T)),
                  _best_time(lambda: classify(QMatrix2.identity())))
    ok &= elapsed < 1e-3
    _report(2, "tangency point and +-I", ok, f"worst classify {elapsed * 1e3:.3f} ms")


def test_criterion_3_oracle_triple_agreement():
    t0 = time.perf_counter()
    exceptions = 0
    cases = set()
    for i in range(10_000):
        P = _sample(i)
        try:
            rep = classify(P)  # region verdict, eigen-case mapping and the
            cases.add(rep.eigenvalues.case_tag)  # fixed-point oracle all agree
            if not rep.is_consistent:
                exceptions += 1
        except Exception:
            exceptions += 1
    elapsed = time.perf_counter() - t0
    ok = exceptions == 0 and elapsed < 30.0
    _report(3, "triple agreement on 10k samples", ok,
            f"{exceptions} exceptions, cases {sorted(cases)}, {elapsed:.1f} s")


def test_criterion_4_closed_forms_vs_oracle():
    worst = 0.0
    small_tau_vii = 0
    for i in range(10_000):
        co = char_poly_coeffs(_sample(i))
        pc = eigenvalues_closed_form(co)
        po = eigenvalues_oracle(co)
        worst = max(worst, abs(pc.lambda1 - po.lambda1), abs(pc.lambda2 - po.lambda2))
        if pc.case_tag == "vii" and abs(co.tau) < 0.05:
            small_tau_vii += 1
    # the real-reciprocal branch never arises from continuous sampling
    # (it needs rho = tau^2 + 2 exactly), so add constructed members
    outer = 0
    for t in (0.3, 1.0, 2.5):
        for B in (hyperbolic_boost(t), -hyperbolic_boost(t)):
            co = char_poly_coeffs(B)
            pc, po = eigenvalues_closed_form(co), eigenvalues_oracle(co)
            worst = max(worst, abs(pc.lambda1 - po.lambda1), abs(pc.lambda2 - po.lambda2))
            outer += pc.case_tag == "iii"
    for t in (0.4, 1.2):  # cos(theta) = 0 exactly: tau = 0
        Z = QMatrix2.diagonal(unit_complex(math.pi / 2), unit_complex(math.pi / 2)) \
            @ hyperbolic_boost(t)
        co = char_poly_coeffs(Z)
        pc, po = eigenvalues_closed_form(co), eigenvalues_oracle(co)
        worst = max(worst, abs(pc.lambda1 - po.lambda1), abs(pc.lambda2 - po.lambda2))
        assert abs(co.tau) <= 1e-12 and pc.case_tag == "vii"
    ok = worst <= 1e-8 and small_tau_vii >= 10 and outer == 6
    _report(4, "closed forms vs quartic oracle", ok,
            f"max deviation {worst:.2e}, {small_tau_vii} small-tau vii samples")


def test_criterion_5_resultant_identity():
    t0 = time.perf_counter()

    def product_formula(co: QuarticCoeffs) -> float:
        f = np.array(quartic_coefficients(co))
        fp = np.array([4.0, -6.0 * co.tau, 2.0 * co.rho, -2.0 * co.tau])
        return float(complex(4.0 ** 4 * np.prod([np.polyval(f, b)
                                                 for b in np.roots(fp)])).real)

    ok = abs(product_formula(QuarticCoeffs(0.0, 0.0)) - 256.0) <= 1e-9
    ok &= abs(product_formula(QuarticCoeffs(0.0, 1.0)) - 144.0) <= 1e-9
    ok &= abs(sylvester_resultant(QuarticCoeffs(0.0, 0.0)) - 256.0) <= 1e-9
    ok &= abs(sylvester_resultant(QuarticCoeffs(0.0, 1.0)) - 144.0) <= 1e-9
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(1000):
        co = QuarticCoeffs(float(rng.uniform(-5, 5)), float(rng.uniform(-10, 30)))
        lhs = sylvester_resultant(co)
        f1, f2, f3 = discriminant_factors(co)
        rhs = RESULTANT_SCALE * f1 * f2 * f3 * f3
        worst = max(worst, abs(lhs - rhs) / (1 + abs(lhs) + abs(rhs)))
    elapsed = time.perf_counter() - t0
    ok &= worst <= 1e-8 and elapsed < 1.0
    _report(5, "resultant identity with constant 16", ok,
            f"max rel deviation {worst:.2e}, {elapsed * 1e3:.0f} ms")


def test_criterion_6_representation_laws():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    worst_hom = worst_adj = worst_det = worst_coef = 0.0
    for i in range(1000):
        P, Q = _sample(2 * i), _sample(2 * i + 1)
        cP, cQ = chi(P), chi(Q)
        scale = 1 + float(np.abs(cP).max()) * float(np.abs(cQ).max())
        worst_hom = max(worst_hom, float(np.abs(chi(P @ Q) - cP @ cQ).max()) / scale)
        worst_adj = max(worst_adj,
                        float(np.abs(chi(P.adjoint()) - cP.conj().T).max()) / scale)
        worst_det = max(worst_det, abs(complex(np.linalg.det(cP)) - 1.0)
                        / (1 + float(np.abs(cP).max()) ** 4))
        tau, rho = char_poly_coeffs(P)
        got = np.poly(cP)
        want = np.array([1.0, -2 * tau, rho, -2 * tau, 1.0])
        worst_coef = max(worst_coef, float(np.abs(got - want).max()) / (1 + abs(rho)))
    elapsed = time.perf_counter() - t0
    ok = max(worst_hom, worst_adj, worst_det, worst_coef) <= 1e-9 and elapsed < 1.0
    _report(6, "representation laws", ok,
            f"hom {worst_hom:.1e} adj {worst_adj:.1e} det {worst_det:.1e} "
            f"coef {worst_coef:.1e}, {elapsed:.2f} s")


def test_criterion_7_geometry_invariants():
    t0 = time.perf_counter()
    rng = np.random.default_rng(21)
    worst_form = worst_ball = worst_comp = worst_lemma = 0.0
    for i in range(10_000):
        P = _sample(i)
        X = HVector(rand_quaternion(rng), rand_quaternion(rng))
        Y = HVector(rand_quaternion(rng), rand_quaternion(rng))
        d = (herm_form(P.apply(X), P.apply(Y)) - herm_form(X, Y)).norm()
        worst_form = max(worst_form, d / (1 + herm_form(X, Y).norm() + P.entry_scale()))

        x = rand_ball_point(rng)
        worst_ball = max(worst_ball, mobius_apply(P, x).norm() - 1.0)
        u = rand_quaternion(rng)
        if u.norm() > 1e-6:
            worst_ball = max(worst_ball, abs(mobius_apply(P, u / u.norm()).norm() - 1.0))

        Q = _sample(20_000 + i)
        lhs = mobius_apply(P @ Q, x)
        rhs = mobius_apply(P, mobius_apply(Q, x))
        worst_comp = max(worst_comp, (lhs - rhs).norm())
    for i in range(10_000):
        P = _sample(i)
        pts = fixed_points(P).points
        pair = eigenvalues_closed_form(char_poly_coeffs(P))
        if abs(abs(pair.lambda1) - 1.0) > 1e-5:  # loxodromic: isotropy
            for p in pts:
                worst_lemma = max(worst_lemma,
                                  abs(herm_form(p.projective, p.projective).w)
                                  / p.projective.norm2())
        elif len(pts) == 2:  # elliptic with two eigenvalue classes: orthogonality
            g = herm_form(pts[0].projective, pts[1].projective).norm()
            scale = math.sqrt(pts[0].projective.norm2() * pts[1].projective.norm2())
            worst_lemma = max(worst_lemma, g / scale)
    elapsed = time.perf_counter() - t0
    ok = (worst_form <= 1e-9 and worst_ball <= 1e-9 and worst_comp <= 1e-8
          and worst_lemma <= 1e-8 and elapsed < 10.0)
    _report(7, "geometry invariants", ok,
            f"form {worst_form:.1e} ball {worst_ball:.1e} action {worst_comp:.1e} "
            f"eigenvector {worst_lemma:.1e}, {elapsed:.1f} s")


def test_criterion_8_conjugation_inverse_invariance():
    rng = np.random.default_rng(33)
    mismatches = 0
    worst = 0.0
    for i in range(5000):
        P = _sample(i)
        Q = moderate_member(rng)
        base = classify(P, cross_check_fixed_points=False)
        conj = classify(Q @ P @ sp11_inverse(Q), cross_check_fixed_points=False)
        inv = classify(sp11_inverse(P), cross_check_fixed_points=False)
        if conj.verdict.tag != base.verdict.tag or inv.verdict.tag != base.verdict.tag:
            mismatches += 1
        scale = 1 + base.tau ** 2 + abs(base.rho)
        for other in (conj, inv):
            worst = max(worst,
                        abs(other.tau - base.tau) / scale,
                        abs(other.rho - base.rho) / scale,
                        abs(other.eigenvalues.lambda1 - base.eigenvalues.lambda1)
                        / (1 + abs(base.eigenvalues.lambda1)),
                        abs(other.eigenvalues.lambda2 - base.eigenvalues.lambda2)
                        / (1 + abs(base.eigenvalues.lambda2)))
    ok = mismatches == 0 and worst <= 1e-8
    _report(8, "conjugation and inverse invariance", ok,
            f"{mismatches} verdict changes, max rel deviation {worst:.2e}")


def test_criterion_9_cli_contract(tmp_path):
    py = [sys.executable, "-m", "quatisom.cli"]
    # determinism: byte-identical output per (config, seed)
    runs = [subprocess.run(py + ["sample", "--count", "5", "--seed", "11",
                                 "--kind", "generic"],
                           capture_output=True) for _ in range(2)]
    ok = runs[0].stdout == runs[1].stdout and runs[0].returncode == 0

    # classify round trip on documented fixtures
    fixture = tmp_path / "fixtures.jsonl"
    fixture.write_text(json.dumps(vertex_parabolic().to_json()) + "\n"
                       + json.dumps(QMatrix2.identity().to_json()) + "\n")
    proc = subprocess.run(py + ["classify", "--input", str(fixture)],
                          capture_output=True, text=True)
    lines = [json.loads(l) for l in proc.stdout.splitlines()]
    ok &= proc.returncode == 0
    ok &= lines[0]["verdict"] == "parabolic" and lines[0]["rho"] == 2.0
    ok &= lines[1]["verdict"] == "identity"

    # rejected record drives exit status 2
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"a":[1,0,0,0],"b":[1,0,0,0],"c":[0,0,0,0],"d":[1,0,0,0]}\n')
    ok &= subprocess.run(py + ["classify", "--input", str(bad)],
                         capture_output=True).returncode == 2

    # region map labels the four designated points
    proc = subprocess.run(py + ["region-map", "--tau=-3:3", "--rho=-4:12",
                                "--step", "0.5"], capture_output=True, text=True)
    rows = {}
    for line in proc.stdout.splitlines()[1:]:
        tau, rho, region, _ = line.split(",")
        rows[(float(tau), float(rho))] = region
    ok &= rows[(0.0, 2.0)] == "parabola_arc"
    ok &= rows[(2.0, 6.0)] == "tangency_point" and rows[(-2.0, 6.0)] == "tangency_point"
    ok &= rows[(0.0, -2.0)] == "R1_line_boundary"
    ok &= rows[(3.0, 10.5)] == "unrealizable"

    # self test passes
    ok &= subprocess.run(py + ["selftest", "--trials", "40"],
                         capture_output=True).returncode == 0
    _report(9, "CLI contract", ok)
