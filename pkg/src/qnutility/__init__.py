"""Quantum network utility for distributed quantum computing."""

from .lp_core import LinearProgram, LPSolution, Status, Tolerances, solve, verify
from .netmodel import (NetworkError, NetworkSpec, load_network, make_chain, make_dumbbell,
                       save_network, split_node)
from .rate_region import (build_rate_constraints, check_feasible, lemma1_transform, max_scale,
                          noswap_utility)
from .tasks import (TaskSpec, UtilityModel, build_tasks, demand_coefficient, enumerate_coalitions,
                    optimal_depth, volume)
from .utility import (EntanglementGraph, SolverFailure, UtilityResult, assemble, compute_utility,
                      max_active_coalition_size, prop2_lower_bound, prop3_upper_bound,
                      prop4_lower_bound)

__version__ = "0.1.0"
