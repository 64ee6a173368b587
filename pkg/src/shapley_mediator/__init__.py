"""Fair and stable recommendation mediators for strategic content providers."""

from .congestion import CongestionGame, build_congestion_game, congestion_payoffs, congestion_potential
from .coop import coalition_value, permutation_counts, shapley_bruteforce
from .dynamics import (
    DynamicsTrace,
    PayoffTable,
    PayoffVector,
    better_response,
    enumerate_pne,
    is_pne,
    payoff_vector,
    potential_value,
    run_dynamics,
)
from .game import (
    EnumerationCapExceeded,
    Game,
    GameError,
    Player,
    SortedLevels,
    enumerate_profiles,
    load_game,
    make_game,
    parse_game,
    satisfaction_of_strategy,
    serialize_game,
    sorted_levels,
)
from .generators import (
    gen_example1,
    gen_impossibility,
    gen_prop6,
    gen_prop7,
    gen_tight_poa,
    random_game,
    random_profile,
)
from .mediators import (
    AxiomReport,
    DisplayDistribution,
    Mediator,
    check_axioms,
    mediate,
    shapley_distribution,
    shapley_sample,
    shapley_sample_many,
)
from .metrics import (
    OPTIMAL_PLAIN,
    ZERO_PLAIN,
    PoAResult,
    UtilityConfig,
    price_of_anarchy,
    social_welfare,
    user_price_of_anarchy,
    user_utility,
)
from .upoa_numeric import min_utility_curve, single_user_utility, solve_stationary, utility_gradient

__version__ = "0.1.0"
