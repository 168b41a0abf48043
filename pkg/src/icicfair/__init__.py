"""Fairness-tunable subchannel allocation for multi-cell OFDMA downlinks.

The model: fixed transmit power, binary (cell, MS, subchannel) assignments,
per-MS Shannon throughput under cross-cell interference, and a shifted
alpha-fair network utility.  Solvers: exhaustive search (exponential,
exact), a Hungarian-matching reduction that is provably optimal whenever
the crosstalk-dominance certificates hold, and a synchronous distributed
greedy protocol.  Plus generators, certificates, an independent-set
reduction, lemma verification, and a sweep/CSV experiment harness.
"""

from .analysis import (LemmaCheckConfig, PRESET_ROWS, SublevelReport,
                       brute_force_mis, f1_eval, f1_limit, f_eval, f_limit,
                       preset_configs, recover_mis_size,
                       scalar_condition_holds, verify_sublevel)
from .distributed import (BsState, RoundRecord, RoundTrace, compute_pa,
                          default_p0, dump_trace, make_states, p0_star,
                          run_distributed, solve_distributed)
from .errors import (GainDomainError, IcicError, InconsistencyError,
                     InstanceTooLargeError, MalformedAllocationError,
                     NoInterfererError, PlacementInfeasibleError,
                     WeightDomainError)
from .exact import SearchBudget, exhaustive_search, state_count
from .fileio import (load_allocation, load_scenario, save_allocation,
                     save_scenario, scenario_from_dict, scenario_to_dict)
from .generate import (ScenarioConfig, generate, mis_gadget_scenario,
                       pathloss_gain)
from .matching import (ConditionEntry, ConditionReport,
                       WeightedBipartiteGraph, applicable_condition,
                       build_weights, check_conditions, cond1_beta_threshold,
                       cond2_beta_threshold, cond2_growth,
                       cond3_beta_threshold, matching_to_allocation,
                       max_weight_matching, solve_via_matching,
                       unserved_utility)
from .model import (Allocation, Params, Scenario, beta, eta,
                    fairness_utility_term, is_feasible, jain_fairness,
                    ms_throughput, sinr_rate, tau_alpha_utility,
                    total_throughput, throughput_vector)
from .report import SolverReport, make_report, report_to_dict
from .sweep import SweepSpec, aggregate, emit_outputs, plot_sweep, run_sweep

__version__ = "0.1.0"
