"""Readout-error mitigation for quantum measurement counts.

Counts are plain dicts mapping bitstrings (rightmost character = qubit 0) to
integer tallies; distributions map bitstrings to floats.
"""

from ._qmitigate import (
    FilterAnnihilatedError,
    UnsupportedCircuitError,
    calibrate,
    counts_to_probs,
    emit_report,
    exact_ground_energy,
    experiment_ids,
    hellinger_fidelity,
    ideal_probabilities,
    mitigate_counts,
    mitigate_m3,
    parity_expectation,
    probs_to_counts,
    rescale_intensity,
    run_experiment,
    run_shots,
    run_vqe,
    success_probability,
    total_variation,
)

__version__ = "0.1.0"

__all__ = [
    "FilterAnnihilatedError",
    "UnsupportedCircuitError",
    "calibrate",
    "counts_to_probs",
    "emit_report",
    "exact_ground_energy",
    "experiment_ids",
    "hellinger_fidelity",
    "ideal_probabilities",
    "mitigate_counts",
    "mitigate_m3",
    "parity_expectation",
    "probs_to_counts",
    "rescale_intensity",
    "run_experiment",
    "run_shots",
    "run_vqe",
    "success_probability",
    "total_variation",
]
