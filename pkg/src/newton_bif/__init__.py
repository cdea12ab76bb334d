"""Bifurcation values of polynomial maps from Newton polyhedra at infinity."""
from .certify import (CandidateValue, Certificate, KfAssembly, assemble_Kf, certify,
                      inclusion_report)
from .cone import Cone, common_edges_count, e_function, face_of_orthant, is_simplicial
from .euler import FiberTopology, chi_affine_curve_fiber, euler_jump, pick_generic_value
from .newton import (FaceClassification, NewtonAnalysis, atypical_faces, bad_faces,
                     check_dim_full, is_convenient, is_relatively_simple,
                     newton_polyhedron_at_infinity)
from .numeric import Tolerances, Value
from .poly import SparsePoly, load_polynomial, parse_polynomial
from .polytope import (FaceDescriptor, LatticePolytope, convex_hull, dual_fan,
                       lattice_basis_of_face_span, normalized_volume, supporting_face)
from .torus import (CriticalValueSet, Verdict, affine_critical_values, critical_values_torus,
                    isolated_singularities_over, nondegenerate_at_infinity,
                    restrict_to_face_torus)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
