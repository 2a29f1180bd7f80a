"""Exact monodromy logarithms, canonical lattices and L2 decisions for
degenerating variations of Hodge structure, with numerical cross-checks."""

from .asymnorm import ModelMetric, Region, boundedness_ratio, model_norm, model_norm_z, region_sample
from .cyclotomic import CycScalar
from .exactlin import ExactMatrix, jordan_chevalley
from .hodgenum import (
    NilpotentOrbitVHS,
    curvature_probe,
    elliptic_model,
    orbit_hodge_metric,
    polarization_check,
    trivial_model,
)
from .l2decide import check_implication, decide, laurent_integrability, reduce_quasi_unipotent
from .lattice import base_change_pullback, canonical_frame, eigen_adapted_basis, evaluate_frame, residues
from .laurent import LaurentSection
from .monodromy import log_decomposition, log_monodromy, validate_tuple
from .quadrature import log_weighted_disk_integral, section_l2_estimate
from .weight import check_axioms, multi_grading, weight_filtration

__version__ = "0.1.0"

__all__ = [
    "CycScalar",
    "ExactMatrix",
    "jordan_chevalley",
    "validate_tuple",
    "log_monodromy",
    "log_decomposition",
    "canonical_frame",
    "eigen_adapted_basis",
    "evaluate_frame",
    "residues",
    "base_change_pullback",
    "LaurentSection",
    "weight_filtration",
    "check_axioms",
    "multi_grading",
    "NilpotentOrbitVHS",
    "elliptic_model",
    "trivial_model",
    "orbit_hodge_metric",
    "polarization_check",
    "curvature_probe",
    "ModelMetric",
    "Region",
    "model_norm",
    "model_norm_z",
    "region_sample",
    "boundedness_ratio",
    "laurent_integrability",
    "decide",
    "reduce_quasi_unipotent",
    "check_implication",
    "log_weighted_disk_integral",
    "section_l2_estimate",
]
