"""Descent via 3-isogeny on plane sections of norm-form cubic surfaces of simplest cubic fields."""

from .classgroup import Effort, IdealClassData, compute_class_group, load_class_group_json, n_cl_g3_direct
from .cubicfield import CubicField, FieldElement, SplittingType, make_field
from .curve import INFINITY, CurvePoint, SectionMap, WeierstrassCurve, dual_curve, vartheta, weierstrass_model
from .descent import DescentReport, compute_s_sets, full_report, n_phi_dimension
from .errors import DegeneratePoint, DescentError, EffortExceeded, HypothesesNotMet, Reducible, Tangent, UnhandledCase
from .surface import Basis, Hyperplane, SurfacePoint

__all__ = [
    "CubicField",
    "FieldElement",
    "SplittingType",
    "make_field",
    "Hyperplane",
    "Basis",
    "SurfacePoint",
    "WeierstrassCurve",
    "CurvePoint",
    "INFINITY",
    "SectionMap",
    "weierstrass_model",
    "dual_curve",
    "vartheta",
    "Effort",
    "IdealClassData",
    "compute_class_group",
    "load_class_group_json",
    "n_cl_g3_direct",
    "DescentReport",
    "compute_s_sets",
    "n_phi_dimension",
    "full_report",
    "DescentError",
    "Reducible",
    "Tangent",
    "HypothesesNotMet",
    "EffortExceeded",
    "DegeneratePoint",
    "UnhandledCase",
]
