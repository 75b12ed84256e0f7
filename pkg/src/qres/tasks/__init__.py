"""The three comparison tasks and their figures of merit."""

from .common import Discrimination, Resource, TaskResult, conclusive_probability, sphere_grid
from .discrimination import (
    POVM_OUTCOMES,
    TASK3_HYPOTHESES,
    RefbitOptimum,
    RefbitPovm,
    convert_sss_to_refbit,
    effective_povm,
    mm_state,
    optimize_refbit_measurement,
    refbit_likelihood,
    refbit_singlet_closed_form,
    task3_conclusive,
    task3_conditional,
    task3_discrimination,
    task3_outcome_table,
    task3_outcomes,
    task3_tables,
)
from .estimation import (
    QUBIT_PAIR_OUTCOMES,
    TASK2_HYPOTHESES,
    spin_pair_outcomes,
    task1_avg_info,
    task1_likelihood_sss,
    task1_probabilities_closed_form,
    task1_probabilities_constructive,
    task2_avg_info,
    task2_conclusive,
    task2_likelihood_sss,
    task2_probabilities_closed_form,
    task2_probabilities_constructive,
    task2_spinj_sweep,
)
from .srf import SRF_OUTCOMES, srf_likelihood, srf_pair_table, srf_sent_table
