"""Exact Ehrhart theory and unimodular equidecompositions of lattice 3-polytopes."""

from .ehrhart import (
    QuasiPolynomial,
    SimplexType,
    basis_evaluation_matrix,
    closed_form,
    count,
    ehrhart_equivalent,
    fit_quasipolynomial,
    orbit_profile_1d,
)
from .equidecomposition import (
    EquidecompCertificate,
    NotEhrhartEquivalent,
    VerificationReport,
    equidecomposable_quick,
    equidecompose,
    verify_certificate,
)
from .exact import UnimodularMap, complete_to_basis, hnf, inv_mod
from .geometry import CLOSED, RELINT, PolytopeV, Simplex, contains, lattice_points, volume
from .halfunimodular import (
    Decomposition,
    canonical_map,
    classify,
    decompose_polytope,
    interior_open_decomposition,
    type_vector,
)
from .triangulation import empty_triangulation
from .white import white_normal_form, white_tetrahedron

__all__ = [
    "CLOSED",
    "RELINT",
    "Decomposition",
    "EquidecompCertificate",
    "NotEhrhartEquivalent",
    "PolytopeV",
    "QuasiPolynomial",
    "Simplex",
    "SimplexType",
    "UnimodularMap",
    "VerificationReport",
    "basis_evaluation_matrix",
    "canonical_map",
    "classify",
    "closed_form",
    "complete_to_basis",
    "contains",
    "count",
    "decompose_polytope",
    "ehrhart_equivalent",
    "empty_triangulation",
    "equidecomposable_quick",
    "equidecompose",
    "fit_quasipolynomial",
    "hnf",
    "interior_open_decomposition",
    "inv_mod",
    "lattice_points",
    "orbit_profile_1d",
    "type_vector",
    "verify_certificate",
    "volume",
    "white_normal_form",
    "white_tetrahedron",
]
