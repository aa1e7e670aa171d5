"""Laboratory for non-local material dynamics on periodic grids.

The compiled core exposes the tensor-field toolbox (second-order periodic
difference operators with exact summation-by-parts) and the scenario harness
behind the `nlt` command-line tool: the same bundled scenarios, checks, and
artifacts, driven from Python.
"""

from nltlab._core import (
    Field,
    Grid,
    Rng,
    biharmonic,
    contract_last,
    div,
    divide,
    gk_identity_residual,
    grad,
    grad2,
    inner,
    l1_norm,
    laplacian,
    list_scenarios,
    max_abs,
    min_value,
    multiply,
    random_field,
    random_trig_field,
    run_scenario,
    scenario_summary,
    second_grade_identity_residual,
    shifted,
    sup_distance_rel,
    validate_scenario,
    volume_integral,
)

__version__ = "0.1.0"

__all__ = [
    "Field",
    "Grid",
    "Rng",
    "biharmonic",
    "contract_last",
    "div",
    "divide",
    "gk_identity_residual",
    "grad",
    "grad2",
    "inner",
    "l1_norm",
    "laplacian",
    "list_scenarios",
    "max_abs",
    "min_value",
    "multiply",
    "random_field",
    "random_trig_field",
    "run_scenario",
    "scenario_summary",
    "second_grade_identity_residual",
    "shifted",
    "sup_distance_rel",
    "validate_scenario",
    "volume_integral",
]
