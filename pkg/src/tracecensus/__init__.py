"""Exact census of hyperbolic SL2(Z) conjugacy classes by trace residue.

The package counts primitive-unit weighted class numbers along trace
lines, reduces traces mod p, and compares the resulting residue masses
against closed-form conjugacy data for SL2(F_p).
"""

__version__ = "0.1.0"

from .analysis import (
    ClassReport,
    DensityReport,
    ExponentFit,
    class_report,
    density_error_series,
    density_report,
    error_exponent_fit,
    psi_error_series,
)
from .census import (
    CensusResult,
    RunConfig,
    line_weight,
    matrix_from_form,
    required_table_limit,
    run_census,
    trace_bound,
    trace_decompositions,
    unit_power_oracle,
)
from .lfunctions import chi_values, l_value, l_value_truncated
from .numtheory import SpfTable, build_spf_table, factorize, kronecker
from .quadforms import (
    class_number,
    class_number_and_reps,
    class_weight,
    fundamental_unit,
    pell_from_known,
    reduced_forms,
    valid_discriminant,
)
from .sl2fp import (
    ConjClass,
    brute_force_classes,
    class_list,
    class_mass,
    classify,
    group_order,
    predicted_density,
    trace_mass,
)

__all__ = [
    "CensusResult",
    "ClassReport",
    "ConjClass",
    "DensityReport",
    "ExponentFit",
    "RunConfig",
    "SpfTable",
    "__version__",
    "brute_force_classes",
    "build_spf_table",
    "chi_values",
    "class_list",
    "class_mass",
    "class_number",
    "class_number_and_reps",
    "class_report",
    "class_weight",
    "classify",
    "density_error_series",
    "density_report",
    "error_exponent_fit",
    "factorize",
    "fundamental_unit",
    "group_order",
    "kronecker",
    "l_value",
    "l_value_truncated",
    "line_weight",
    "matrix_from_form",
    "pell_from_known",
    "predicted_density",
    "psi_error_series",
    "reduced_forms",
    "required_table_limit",
    "run_census",
    "trace_bound",
    "trace_decompositions",
    "trace_mass",
    "unit_power_oracle",
    "valid_discriminant",
]
