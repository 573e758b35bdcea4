"""Container-based packing for the three-dimensional geometric knapsack."""

from .bounds import (
    ProfitProfile, certify, lower_bound_formulas, ratio_certificate, tight_instances, verify_dual_certificate,
)
from .classify import Classification, big_wide_long_small, choose_delta, classify_items
from .containers import Container, cap, check_container_layout, f_C, pack_into_container
from .gap import GapInstance, GapResult, build_gap_instance, solve_gap_exact, solve_gap_greedy
from .geometry import (
    Box3D, CubikError, Instance, Item, Knapsack, LimitExceeded, PackingError, PackingSolution, Params,
    Placement, PreconditionError, Rect, RectPlacement, Region2D, UnknownItemError, validate_packing,
)
from .instances import gen_hardness, gen_random, hardness_optimal_packing, oracle_exact
from .io import parse_instance, parse_solution, write_instance, write_solution
from .strategies import STRATEGIES, PortfolioConfig, portfolio_solve
from .subroutines import nfdh_2d, nfdh_3d, pack_sheets, stack_pack, steinberg_condition, steinberg_pack
from .volpack import layers_pack, vol_pack_3d, vol_pack_3dr

__version__ = "0.1.0"
