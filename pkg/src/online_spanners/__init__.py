"""Online primal-dual covering and packing, and online directed pairwise spanners."""

from .covering import ConstraintRow, CoveringState, FixReport, OracleContractError
from .exact import (SizeLimit, brute_force_opt, enumerate_paths, exact_covering_lp,
                    exact_flow_value, exact_lp_opt)
from .generators import generate, is_quasimetric
from .graph import (INF, UNBOUNDED, Demand, DirectedGraph, InfeasibleDemand, InvalidGraphError,
                    Thickness, cheapest_feasible_path, classify_thickness, distance_in_subgraph,
                    hop_length_profile, is_feasible, local_graph, shortest_distances,
                    shortest_path_arborescence, within)
from .packing import PackingReport, PackingState
from .separation import SeparatingConstraint, Separation, restricted_min_weight_path, separate, solve_round
from .spanner import Mode, OnlineSpanner, RoundOutcome, SpannerParams, lp_schedule, params_for, run_spanner

__version__ = "0.1.0"
