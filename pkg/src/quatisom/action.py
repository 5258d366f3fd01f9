"""The Möbius action on the ball model and fixed-point extraction.

An Sp(1,1) element acts on the closed quaternionic unit ball by
x -> (a x + b)(c x + d)^{-1}.  Fixed points are read off right
eigenvectors: an eigenvector X = (X1, X2) of negative, zero or positive
form value projects to an interior, boundary or exterior fixed point,
with ball coordinate x = X1 X2^{-1}.  Interior fixed point => elliptic;
one boundary point => parabolic; two => loxodromic.  This geometric
route is the independent cross-check for the trace-invariant verdict.

Eigenvectors of the right eigenvalue lambda are null vectors of
chi(P) - lambda I, pulled back through the complex representation.
Extraction anchors at the closed-form eigenvalues (which solve the same
quartic but without iteration noise at multiple roots), finds the null
structure by full-pivot elimination, and polishes every vector with
Rayleigh-quotient iteration so that reported fixed points carry Möbius
residuals at rounding level.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from .config import resolve
from .errors import EigenvectorExtractionError, TrichotomyViolationError
from .quaternion import Quaternion
from .representation import char_poly_coeffs, chi, vector_from_chi_column
from .sp11 import HVector, QMatrix2, VectorSign, herm_form, require_sp11, vector_sign
from .spectrum import eigenvalues_closed_form

#: Ball point type: a quaternion with |x| <= 1 + eps.
BallPoint = Quaternion

#: Hard rank threshold (times ||chi||) for null-space pivots.
RANK_RTOL = 1e-8

#: Möbius residual allowed on a reported fixed point.
FIXED_POINT_RESIDUAL = 1e-8

_GRAM_ZERO_RTOL = 1e-3
_RQI_ROUNDS = 4
_RQI_TARGET = 1e-13


# ---------------------------------------------------------------------------
# Möbius action
# ---------------------------------------------------------------------------

def in_closed_ball(x: Quaternion, tol: float | None = None) -> bool:
    return x.norm() <= 1.0 + resolve(tol)


def mobius_apply(P: QMatrix2, x: BallPoint, tol: float | None = None) -> BallPoint:
    """(a x + b)(c x + d)^{-1}; preserves the closed ball.

    The denominator cannot vanish for |x| <= 1 because |d| > |c| for
    members; a vanishing denominator signals an invalid input.
    """
    require_sp11(P, tol)
    den = P.c * x + P.d
    if den.norm() <= resolve(tol) * (1.0 + P.c.norm() * x.norm() + P.d.norm()):
        raise ValueError("Möbius denominator vanished: point outside the "
                         "closed ball or matrix not in Sp(1,1)")
    return (P.a * x + P.b) * den.inverse()


def normal_form_action(isometry, point: Quaternion, tol: float | None = None) -> Quaternion:
    """Evaluate the model map of a classified isometry at a point.

    Elliptic forms act on ball coordinates x = u + v j by
    u -> e^{i alpha} u, v -> e^{i beta} v.  Parabolic and loxodromic
    forms act on Siegel-domain coordinates (Re xi < 0) by
    xi -> lam xi lam^{-1} + lam^{-1} and xi -> r^2 e^{i theta} xi e^{-i theta}.
    """
    tag = getattr(isometry, "tag", None)
    nf = getattr(isometry, "normal_form", None)
    if tag is None or nf is None:
        raise ValueError("isometry must carry 'tag' and 'normal_form'")
    if tag in ("identity", "minus_identity"):
        return point
    if tag == "elliptic":
        try:
            alpha, beta = nf["alpha"], nf["beta"]
        except KeyError:
            raise ValueError("elliptic normal form needs alpha and beta") from None
        u, v = point.complex_decompose()
        return Quaternion.from_complex_pair(cmath.exp(1j * alpha) * u,
                                            cmath.exp(1j * beta) * v)
    if tag == "parabolic":
        try:
            lam_re, lam_im = nf["lambda"]
        except (KeyError, TypeError, ValueError):
            raise ValueError("parabolic normal form needs lambda") from None
        lam = Quaternion(lam_re, lam_im, 0.0, 0.0)
        lam_inv = lam.inverse()
        return lam * point * lam_inv + lam_inv
    if tag == "loxodromic":
        try:
            r, theta = nf["r"], nf["theta"]
        except KeyError:
            raise ValueError("loxodromic normal form needs r and theta") from None
        rot = Quaternion(math.cos(theta), math.sin(theta), 0.0, 0.0)
        return (r * r) * (rot * point * rot.inverse())
    raise ValueError(f"unknown isometry tag {tag!r}")


# ---------------------------------------------------------------------------
# Small complex linear algebra (4x4, hand-rolled: hot path)
# ---------------------------------------------------------------------------

def _shifted(M: Sequence[Sequence[complex]], lam: complex) -> list[list[complex]]:
    return [[M[i][j] - (lam if i == j else 0.0) for j in range(4)] for i in range(4)]

def _mat_vec(M, v):
    return [sum(M[i][j] * v[j] for j in range(4)) for i in range(4)]

def _vdot(u, v):
    return sum(u[i].conjugate() * v[i] for i in range(4))

def _vnorm(v):
    return math.sqrt(sum(abs(x) ** 2 for x in v))

def _vscale(v, s):
    return [x * s for x in v]

def _frobenius(M) -> float:
    return math.sqrt(sum(abs(M[i][j]) ** 2 for i in range(4) for j in range(4)))


def _solve4(M: Sequence[Sequence[complex]], b: Sequence[complex]) -> list[complex]:
    """Partial-pivot solve; near-singular pivots are floored at a relative
    level so the system stays solvable without overflow (inverse iteration
    relies on the resulting bounded growth)."""
    A = [list(M[i]) + [b[i]] for i in range(4)]
    floor = 1e-20 * (1.0 + max(abs(M[i][j]) for i in range(4) for j in range(4)))
    for k in range(4):
        p = max(range(k, 4), key=lambda i: abs(A[i][k]))
        if p != k:
            A[k], A[p] = A[p], A[k]
        if abs(A[k][k]) < floor:
            A[k][k] = floor
        piv = A[k][k]
        for i in range(k + 1, 4):
            f = A[i][k] / piv
            if f != 0:
                for j in range(k, 5):
                    A[i][j] -= f * A[k][j]
    x = [0j] * 4
    for k in range(3, -1, -1):
        s = A[k][4] - sum(A[k][j] * x[j] for j in range(k + 1, 4))
        x[k] = s / A[k][k]
    return x


def _null_structure(M: Sequence[Sequence[complex]], scale: float,
                    hard: float, soft: float) -> tuple[int, int, list[list[complex]]]:
    """Full-pivot elimination rank analysis.

    Returns (hard_nullity, soft_nullity, candidate_vectors): pivots below
    hard * scale count as zero; pivots below soft * scale mark directions
    that may belong to a defective cluster.  Candidate vectors span the
    soft null space (unrefined).
    """
    A = [list(row) for row in M]
    n = 4
    cols = list(range(n))
    pivots: list[float] = []
    for k in range(n):
        pi, pj, best = k, k, -1.0
        for i in range(k, n):
            for j in range(k, n):
                v = abs(A[i][j])
                if v > best:
                    pi, pj, best = i, j, v
        pivots.append(best)
        if best == 0.0:
            for r in range(k + 1, n):
                pivots.append(0.0)
            break
        if pi != k:
            A[k], A[pi] = A[pi], A[k]
        if pj != k:
            for row in A:
                row[k], row[pj] = row[pj], row[k]
            cols[k], cols[pj] = cols[pj], cols[k]
        piv = A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / piv
            if f != 0:
                for j in range(k, n):
                    A[i][j] -= f * A[k][j]
    pivots = pivots[:n]
    hard_nullity = sum(1 for p in pivots if p <= hard * scale)
    soft_nullity = sum(1 for p in pivots if p <= soft * scale)
    rank = n - max(1, soft_nullity)  # at least one candidate direction

    vectors = []
    for free in range(rank, n):
        xp = [0j] * n
        xp[free] = 1.0
        for k in range(rank - 1, -1, -1):
            s = -sum(A[k][j] * xp[j] for j in range(k + 1, n))
            xp[k] = s / A[k][k] if abs(A[k][k]) > 1e-300 else 0j
        x = [0j] * n
        for i in range(n):
            x[cols[i]] = xp[i]
        nv = _vnorm(x)
        vectors.append(_vscale(x, 1.0 / nv) if nv > 0 else x)
    return hard_nullity, soft_nullity, vectors


def _rayleigh_polish(M: Sequence[Sequence[complex]], lam: complex,
                     v0: Sequence[complex]) -> tuple[complex, list[complex], float]:
    """Rayleigh-quotient iteration from shift lam; returns (mu, v, residual)."""
    v = list(v0)
    n = _vnorm(v)
    if n == 0.0:
        v = [1.0 + 0j, 0j, 0j, 0j]
    else:
        v = _vscale(v, 1.0 / n)
    nrm = _frobenius(M)
    mu = _vdot(v, _mat_vec(M, v))
    res0 = _vnorm([a - mu * b for a, b in zip(_mat_vec(M, v), v)])
    best_v, best_res, best_mu = v, res0, mu
    if res0 <= _RQI_TARGET * nrm:
        return mu, v, res0
    mu = lam
    for _ in range(_RQI_ROUNDS):
        w = _solve4(_shifted(M, mu), v)
        nw = _vnorm(w)
        if nw == 0.0 or not math.isfinite(nw):
            break
        v = _vscale(w, 1.0 / nw)
        mu = _vdot(v, _mat_vec(M, v))
        res = _vnorm([a - mu * b for a, b in zip(_mat_vec(M, v), v)])
        if res < best_res:
            best_v, best_res, best_mu = v, res, mu
        if res <= _RQI_TARGET * nrm:
            break
    return best_mu, best_v, best_res


def _orthonormalize(vs: list[list[complex]]) -> list[list[complex]]:
    out: list[list[complex]] = []
    for v in vs:
        w = list(v)
        for u in out:
            c = _vdot(u, w)
            w = [a - c * b for a, b in zip(w, u)]
        n = _vnorm(w)
        if n > 1e-12:
            out.append(_vscale(w, 1.0 / n))
    return out


def _restriction(M, V) -> tuple[list[list[complex]], float]:
    MV = [_mat_vec(M, v) for v in V]
    R = [[_vdot(V[i], MV[j]) for j in range(2)] for i in range(2)]
    resid = 0.0
    for j in range(2):
        approx = [R[0][j] * V[0][i] + R[1][j] * V[1][i] for i in range(4)]
        resid = max(resid, _vnorm([a - b for a, b in zip(MV[j], approx)]))
    return R, resid


def _invariant_plane(M, lam: complex, seeds: list[list[complex]]) -> tuple[list[list[complex]], list[list[complex]], float]:
    """Refine a 2-dimensional near-invariant subspace at shift lam.

    Returns (orthonormal basis V, restriction R = V^H M V, residual);
    keeps whichever subspace iterate has the smallest invariance residual.
    """
    base = _orthonormalize(seeds)
    while len(base) < 2:
        probe = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        for p in probe:
            cand = _orthonormalize(base + [[complex(x) for x in p]])
            if len(cand) > len(base):
                base = cand
                break
    V = base[:2]
    best_V, (best_R, best_res) = V, _restriction(M, V)
    Ms = _shifted(M, lam)
    for _ in range(2):
        W = [_solve4(Ms, v) for v in V]
        V2 = _orthonormalize(W)
        if len(V2) < 2:
            break
        V = V2
        R, res = _restriction(M, V)
        if res < best_res:
            best_V, best_R, best_res = V, R, res
    return best_V, best_R, best_res


def _eig2(R) -> tuple[tuple[complex, list[complex]], tuple[complex, list[complex]]]:
    """Eigenpairs of a complex 2x2 matrix (closed form)."""
    p, q = R[0][0], R[0][1]
    r, s = R[1][0], R[1][1]
    half_tr = (p + s) / 2.0
    disc = cmath.sqrt(half_tr * half_tr - (p * s - q * r))
    out = []
    for mu in (half_tr + disc, half_tr - disc):
        v1 = [q, mu - p]
        v2 = [mu - s, r]
        v = v1 if max(abs(v1[0]), abs(v1[1])) >= max(abs(v2[0]), abs(v2[1])) else v2
        n = math.hypot(abs(v[0]), abs(v[1]))
        if n == 0.0:
            v, n = [1.0 + 0j, 0j], 1.0
        out.append((mu, [v[0] / n, v[1] / n]))
    return out[0], out[1]


def _eigh2(alpha: float, gamma: complex, beta: float) -> tuple[tuple[float, list[complex]], tuple[float, list[complex]]]:
    """Eigenpairs of the Hermitian 2x2 [[alpha, gamma], [conj(gamma), beta]]."""
    mid = (alpha + beta) / 2.0
    rad = math.hypot((alpha - beta) / 2.0, abs(gamma))
    pairs = []
    for mu in (mid - rad, mid + rad):
        v1 = [gamma, mu - alpha]
        v2 = [mu - beta, gamma.conjugate()]
        v = v1 if max(abs(v1[0]), abs(v1[1])) >= max(abs(v2[0]), abs(v2[1])) else v2
        n = math.hypot(abs(v[0]), abs(v[1]))
        if n == 0.0:
            v, n = [1.0 + 0j, 0j], 1.0
        pairs.append((mu, [v[0] / n, v[1] / n]))
    return pairs[0], pairs[1]


# ---------------------------------------------------------------------------
# Fixed points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixedPoint:
    """One projective fixed point with its ball location.

    ``x`` is the ball coordinate X1 X2^{-1} (None for exterior points
    whose second component vanishes); ``projective`` keeps the
    eigenvector itself.
    """

    location: str  # "interior" | "boundary" | "exterior"
    x: Quaternion | None
    projective: HVector
    note: str = ""

    def to_json(self) -> dict[str, Any]:
        return {
            "location": self.location,
            "x": None if self.x is None else self.x.to_json(),
            "projective": [self.projective.x1.to_json(), self.projective.x2.to_json()],
        }


@dataclass(frozen=True)
class FixedPointSet:
    points: tuple[FixedPoint, ...] = field(default_factory=tuple)

    def interior(self) -> tuple[FixedPoint, ...]:
        return tuple(p for p in self.points if p.location == "interior")

    def boundary(self) -> tuple[FixedPoint, ...]:
        return tuple(p for p in self.points if p.location == "boundary")

    def exterior(self) -> tuple[FixedPoint, ...]:
        return tuple(p for p in self.points if p.location == "exterior")

    @property
    def ball_count(self) -> int:
        """Fixed points in the closed ball; exterior points never count."""
        return len(self.points) - len(self.exterior())

    def to_json(self) -> list[dict[str, Any]]:
        return [p.to_json() for p in self.points]


def _projectively_close(X: HVector, Y: HVector, tol: float) -> bool:
    nx, ny = math.sqrt(X.norm2()), math.sqrt(Y.norm2())
    if nx == 0.0 or ny == 0.0:
        return False
    if X.x1.norm() >= X.x2.norm():
        if Y.x1.norm() == 0.0:
            return False
        q = X.x1.inverse() * Y.x1
        return (X.x2 * q - Y.x2).norm() <= tol * ny
    if Y.x2.norm() == 0.0:
        return False
    q = X.x2.inverse() * Y.x2
    return (X.x1 * q - Y.x1).norm() <= tol * ny


def _point_from_vector(X1: Quaternion, X2: Quaternion, iso_band: float,
                       note: str = "") -> FixedPoint:
    X = HVector(X1, X2)
    sign = vector_sign(X, tol=iso_band)
    if sign is VectorSign.POSITIVE:
        x = X1 * X2.inverse() if X2.norm2() > 1e-6 * X.norm2() else None
        return FixedPoint("exterior", x, X, note)
    # non-positive vectors have |X2| >= |X|/sqrt(2), so the coordinate exists
    x = X1 * X2.inverse()
    location = "interior" if sign is VectorSign.NEGATIVE else "boundary"
    return FixedPoint(location, x, X, note)


_LOCATION_ORDER = {"interior": 0, "boundary": 1, "exterior": 2}


def fixed_points(P: QMatrix2, tol: float | None = None) -> FixedPointSet:
    """All projective fixed points of the collineation of P (P != +-I).

    Interior and boundary points carry ball coordinates; exterior
    (positive) points are reported but never counted toward the
    elliptic/parabolic/loxodromic trichotomy.
    """
    from .classify import is_plus_minus_identity  # local: avoid import cycle

    e = resolve(tol)
    require_sp11(P, tol)
    if is_plus_minus_identity(P, e):
        raise ValueError("fixed points of +-I are the whole ball; classification "
                         "requires P != +-I")
    coeffs = char_poly_coeffs(P, tol)
    pair = eigenvalues_closed_form(coeffs, e)
    case = pair.case_tag

    M = [[complex(z) for z in row] for row in chi(P)]
    nrm = _frobenius(M)
    iso_band = math.sqrt(e)
    soft_band = math.sqrt(e)
    merge_tol = 10.0 * math.sqrt(e)

    points: list[FixedPoint] = []

    def add_simple(lam: complex, note: str) -> None:
        hard_n, soft_n, seeds = _null_structure(_shifted(M, lam), nrm, RANK_RTOL, soft_band)
        seed = seeds[0] if seeds else [1.0 + 0j, 0j, 0j, 0j]
        mu, v, res = _rayleigh_polish(M, lam, seed)
        if res > 1e-6 * nrm:
            raise EigenvectorExtractionError(
                f"eigenvector extraction failed at lambda = {lam}: residual {res:.3e}")
        X1, X2 = vector_from_chi_column(v)
        points.append(_point_from_vector(X1, X2, iso_band, note))
        # a real eigenvalue owns a full quaternionic eigenline; both null
        # directions project to the same point, so one vector suffices.

    if case in ("i", "v"):
        lam0 = (complex(1.0) if coeffs.tau > 0 else complex(-1.0)) if case == "i" \
            else (pair.lambda1 + pair.lambda2) / 2.0
        hard_n, soft_n, seeds = _null_structure(_shifted(M, lam0), nrm, RANK_RTOL, soft_band)
        if soft_n >= 2:
            V, R, resid = _invariant_plane(M, lam0, seeds)
            if resid > 1e-5 * nrm:
                raise EigenvectorExtractionError(
                    f"invariant plane refinement failed at lambda = {lam0}: "
                    f"residual {resid:.3e}")
            Xs = [vector_from_chi_column(v) for v in V]
            H = [HVector(*x) for x in Xs]
            G = [[herm_form(H[i], H[j]) for j in range(2)] for i in range(2)]
            gscale = max(H[0].norm2(), H[1].norm2())
            if max(G[i][j].norm() for i in range(2) for j in range(2)) <= _GRAM_ZERO_RTOL * gscale:
                # an isotropic eigenline: the single boundary fixed point
                points.append(_point_from_vector(*Xs[0], iso_band, "double eigenvalue, defective"))
            else:
                (mu1, w1), (mu2, w2) = _eig2(R)
                wdet = abs(w1[0] * w2[1] - w1[1] * w2[0])
                if abs(mu1 - mu2) > 1e-12 * nrm and wdet > 1e-3:
                    combos = [w1, w2]
                    note = "double eigenvalue, diagonalizable"
                else:
                    # genuinely scalar restriction: split by the form's signature
                    jpart = max(abs(G[i][j].y) + abs(G[i][j].z) for i in range(2) for j in range(2))
                    if jpart > _GRAM_ZERO_RTOL * gscale:
                        raise EigenvectorExtractionError(
                            "eigenspace Gram matrix is not complex-valued")
                    (mun, wn), (mup, wp) = _eigh2(G[0][0].w, complex(G[0][1].w, G[0][1].x), G[1][1].w)
                    if not (mun < 0 < mup):
                        raise EigenvectorExtractionError(
                            f"eigenspace signature is not (1,1): {mun:.3e}, {mup:.3e}")
                    combos = [wn, wp]
                    note = "double eigenvalue, eigenspace of signature (1,1)"
                for w in combos:
                    vec = [V[0][i] * w[0] + V[1][i] * w[1] for i in range(4)]
                    X1, X2 = vector_from_chi_column(vec)
                    points.append(_point_from_vector(X1, X2, iso_band, note))
        else:
            seed = seeds[0] if seeds else [1.0 + 0j, 0j, 0j, 0j]
            mu, v, res = _rayleigh_polish(M, lam0, seed)
            if res > 1e-6 * nrm:
                raise EigenvectorExtractionError(
                    f"eigenvector extraction failed at lambda = {lam0}: residual {res:.3e}")
            X1, X2 = vector_from_chi_column(v)
            points.append(_point_from_vector(X1, X2, iso_band, "double eigenvalue, defective"))
    else:
        add_simple(pair.lambda1, "eigenvalue lambda1")
        add_simple(pair.lambda2, "eigenvalue lambda2")

    # projective dedupe (a quaternionic eigenline reached twice is one point)
    unique: list[FixedPoint] = []
    for p in points:
        if not any(_projectively_close(p.projective, q.projective, merge_tol) for q in unique):
            unique.append(p)
    unique.sort(key=lambda p: (_LOCATION_ORDER[p.location],) +
                (tuple(p.x) if p.x is not None else (math.inf,)))
    return FixedPointSet(tuple(unique))


def eigenvalue_on_positive_line(P: QMatrix2, candidates: tuple[complex, complex],
                                tol: float | None = None) -> complex:
    """Which of two candidate eigenvalues acts on the positive eigenline.

    Elliptic normal forms attach the first rotation angle to the
    positive-signature direction; eigenvalue data alone cannot tell the
    two lines apart, so one eigenvector extraction settles it.
    """
    e = resolve(tol)
    M = [[complex(z) for z in row] for row in chi(P)]
    nrm = _frobenius(M)
    lam = candidates[0]
    _, _, seeds = _null_structure(_shifted(M, lam), nrm, RANK_RTOL, math.sqrt(e))
    seed = seeds[0] if seeds else [1.0 + 0j, 0j, 0j, 0j]
    _, v, res = _rayleigh_polish(M, lam, seed)
    if res > 1e-6 * nrm:
        raise EigenvectorExtractionError(
            f"eigenvector extraction failed at lambda = {lam}: residual {res:.3e}")
    X = HVector(*vector_from_chi_column(v))
    sign = vector_sign(X, tol=math.sqrt(e))
    if sign is VectorSign.POSITIVE:
        return candidates[0]
    if sign is VectorSign.NEGATIVE:
        return candidates[1]
    raise EigenvectorExtractionError(
        "eigenline signs are degenerate; no positive-line assignment")


def classify_by_fixed_points(P: QMatrix2, tol: float | None = None) -> str:
    """Verdict tag from the fixed-point trichotomy (the geometric oracle).

    Validates that every reported ball fixed point is Möbius-fixed to
    within FIXED_POINT_RESIDUAL before counting.
    """
    fps = fixed_points(P, tol)
    for p in fps.points:
        if p.location == "exterior" or p.x is None:
            continue
        residual = (mobius_apply(P, p.x, tol) - p.x).norm()
        if residual > FIXED_POINT_RESIDUAL * (1.0 + p.x.norm()):
            raise TrichotomyViolationError(
                f"reported {p.location} fixed point moves by {residual:.3e}")
    if fps.interior():
        return "elliptic"
    boundary = fps.boundary()
    if len(boundary) == 1:
        return "parabolic"
    if len(boundary) == 2:
        return "loxodromic"
    raise TrichotomyViolationError(
        f"fixed-point count violates the trichotomy: "
        f"{len(fps.interior())} interior, {len(boundary)} boundary")
