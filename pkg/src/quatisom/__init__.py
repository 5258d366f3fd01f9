"""Classification of isometries of the quaternionic hyperbolic line.

Elements of Sp(1,1) act on the unit ball of the quaternions by Möbius
transformations.  This package computes the trace invariants (tau, rho)
of the 4x4 complex representation, locates them in the (tau, rho)-plane,
extracts the substantial right eigenvalues in closed form, and classifies
each element as elliptic, parabolic or loxodromic, cross-validated by an
independent fixed-point oracle.
"""

from .action import (BallPoint, FixedPoint, FixedPointSet, classify_by_fixed_points,
                     fixed_points, mobius_apply, normal_form_action)
from .classify import (ClassificationReport, IsometryClass, Region, classify,
                       region_of, structural_diag_test)
from .config import get_tolerance, set_tolerance
from .errors import (ConjugatePairingError, EigenvectorExtractionError,
                     InconsistencyError, NotInSp11Error, QuatisomError,
                     RootConvergenceError, TrichotomyViolationError,
                     UnrealizableInvariantsError)
from .quaternion import Quaternion
from .representation import (QuarticCoeffs, char_poly_coeffs, chi,
                             discriminant_factors, quartic_roots,
                             sylvester_resultant)
from .sp11 import (HVector, QMatrix2, VectorSign, herm_form, hyperbolic_boost,
                   is_sp11, sample_sp11, sp11_inverse, tangency_translation,
                   vector_sign)
from .spectrum import (SubstantialPair, classify_case, eigenvalues_closed_form,
                       eigenvalues_oracle, make_pair, reconstruct_invariants)

__version__ = "0.1.0"

__all__ = [
    "BallPoint", "ClassificationReport", "ConjugatePairingError",
    "EigenvectorExtractionError", "FixedPoint", "FixedPointSet", "HVector",
    "InconsistencyError", "IsometryClass", "NotInSp11Error", "QMatrix2",
    "QuarticCoeffs", "Quaternion", "QuatisomError", "Region",
    "RootConvergenceError", "SubstantialPair", "TrichotomyViolationError",
    "UnrealizableInvariantsError", "VectorSign", "char_poly_coeffs", "chi",
    "classify", "classify_by_fixed_points", "classify_case",
    "discriminant_factors", "eigenvalues_closed_form", "eigenvalues_oracle",
    "fixed_points", "get_tolerance", "herm_form", "hyperbolic_boost",
    "is_sp11", "make_pair", "mobius_apply", "normal_form_action",
    "quartic_roots", "region_of", "reconstruct_invariants", "sample_sp11",
    "set_tolerance", "sp11_inverse", "structural_diag_test",
    "sylvester_resultant", "tangency_translation", "vector_sign",
]
