"""Pinned solid-on-solid interface toolkit: lattice energetics, contour and
tile machinery, exact invertible maps, an exact-enumeration oracle, and a
reproducible heat-bath sampler."""

from .lattice import (HeightField, InadmissibleFieldError, Lattice, Mode,
                      ModelParams, edge_boundary_count, energy, energy_delta,
                      is_admissible, q2_set, total_gradient)
from .measure import (HeightPrediction, flat_comparison_height,
                      heat_bath_distribution, lambda_critical, target_height)
from .contours import (Contour, Sign, delta_boundary, extract_contours,
                       is_simply_connected, level_decomposition,
                       outermost_down_contour)
from .tiles import Shape, Tile, Tiling, classify_shape, tile_cover
from .transforms import (LiftSpec, NotInImageError, TransformPreconditionError,
                         compute_Xk, greedy_disjoint_pairs, invert_T, invert_U,
                         lift_U, lift_exponent, shift_T, shift_down)
from .oracle import (BudgetError, EnumerationSpec, ExactDistribution,
                     check_monotonicity, domino_value_closed_form,
                     enumerate_measure, iter_configs, tile_value, tooth_rate,
                     truncation_bound, verify_positive_part_identity)
from .sampler import (ChainConfig, MeasurementRecord, StartSpec,
                      dual_start_diagnostic, run_chain)
from .sweep import LambdaMode, SweepPlan, run_sweep, load_summary_rows
from .logsum import StreamingLogSumExp, logsumexp

__version__ = "0.1.0"
