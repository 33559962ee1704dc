"""Single-qubit dynamical decoupling simulator.

Thin python layer over the C++ core: sequence construction, Monte Carlo
decay measurements, average-Hamiltonian verification and exponential decay
fits. See the project README for the CLI and config-file interface.
"""

from ._ddsim import (
    __version__,
    aht_table,
    cycle_info,
    effective_hamiltonian_components,
    error_per_pulse,
    fit_double_exponential,
    fit_single_exponential,
    imperfect_pulse,
    magnus_terms,
    ou_chi_echo,
    ou_chi_fid,
    rotation_propagator,
    run_ensemble,
    sequence_names,
)

__all__ = [
    "__version__",
    "aht_table",
    "cycle_info",
    "effective_hamiltonian_components",
    "error_per_pulse",
    "fit_double_exponential",
    "fit_single_exponential",
    "imperfect_pulse",
    "magnus_terms",
    "ou_chi_echo",
    "ou_chi_fid",
    "rotation_propagator",
    "run_ensemble",
    "sequence_names",
]
