"""Lattice U(1) Higgs model laboratory.

Bosonic VQE simulation, exact diagonalization and DMRG for the 1+1D
Abelian Higgs model with a background-field (topological) term.
"""

from higgslab._core import (
    ModelParams,
    beam_splitter_hamiltonian,
    charge_conjugation_check,
    dmrg_ground,
    ed_sweep,
    effective_hamiltonian,
    estimator_stats,
    full_gauge_hamiltonian,
    hobm_hamiltonian,
    jump_location,
    limiting_efd,
    number_number_hamiltonian,
    predict_jump,
    shot_budget,
    spin_hamiltonian,
    squid_expansion_oracle,
    truncation_defect,
    vqe_ground,
    __version__,
)

__all__ = [
    "ModelParams",
    "beam_splitter_hamiltonian",
    "charge_conjugation_check",
    "dmrg_ground",
    "ed_sweep",
    "effective_hamiltonian",
    "estimator_stats",
    "full_gauge_hamiltonian",
    "hobm_hamiltonian",
    "jump_location",
    "limiting_efd",
    "number_number_hamiltonian",
    "predict_jump",
    "shot_budget",
    "spin_hamiltonian",
    "squid_expansion_oracle",
    "truncation_defect",
    "vqe_ground",
    "__version__",
]
