"""Grover search amplitudes and the bipartite entanglement they carry."""
from __future__ import annotations

from .analytic import (
    PartitionSpec,
    concurrence_chain,
    concurrence_post_oracle,
    concurrence_state,
    eta,
    eta_prime,
    exact_concurrence,
    multi_target_concurrence,
    oracle_entanglement_gain,
    rate_form_concurrence,
    reflection_entanglement_change,
    schmidt_coefficients,
    schmidt_vectors,
    speedup_condition_integrate,
    split_from_marked,
)
from .core import (
    SearchParams,
    TwoDimState,
    amplitude_closed_form,
    analytic_params,
    iterate,
    make_params,
    optimal_iterations,
    success_probability,
)
from .errors import GroverError
from .linalg import SchmidtData, jacobi_eigh
from .statevector import StateVector, concurrence_numeric, grover_run, reduced_density

__all__ = [
    "GroverError",
    "PartitionSpec",
    "SchmidtData",
    "SearchParams",
    "StateVector",
    "TwoDimState",
    "amplitude_closed_form",
    "analytic_params",
    "concurrence_chain",
    "concurrence_numeric",
    "concurrence_post_oracle",
    "concurrence_state",
    "eta",
    "eta_prime",
    "exact_concurrence",
    "grover_run",
    "iterate",
    "jacobi_eigh",
    "make_params",
    "multi_target_concurrence",
    "optimal_iterations",
    "oracle_entanglement_gain",
    "rate_form_concurrence",
    "reduced_density",
    "reflection_entanglement_change",
    "schmidt_coefficients",
    "schmidt_vectors",
    "speedup_condition_integrate",
    "split_from_marked",
    "success_probability",
]
