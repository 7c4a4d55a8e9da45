"""Exact Bayesian games, multi-games and prior-independent equilibrium checks."""

from .games import (
    FiniteBayesianGame,
    GameInputError,
    GeneralizedMultiGame,
    MixedStrategy,
    MultiGame,
    NormalFormGame,
    Prior,
    SimplexPoint,
    StrategyMapProfile,
    bayesian_expected_utility,
    double_game_type,
    is_bne,
    local_game,
    mixed_payoff,
    pure_payoff,
)
from .linear import (
    OwnTypeLinearGame,
    TypeLinearGame,
    equivalence_audit,
    normalize_type,
    to_generalized_mg,
    to_mg,
)
from .nash import (
    NEResult,
    best_response_set,
    is_nash,
    pure_ne_enumerate,
    support_enumeration_2p,
)
from .regularity import (
    DoubleGameSpec,
    RegularityReport,
    Witness,
    check_prop1,
    check_prop2,
    extend_witness,
    theorem1_audit,
    verify_type_regularity,
    vertex_regularity_search,
)
from .staged import (
    build_pd_dg,
    build_trust_dg,
    receiver_best_reply,
    sender_threshold,
    spe_with_belief,
)

__version__ = "0.1.0"

__all__ = [
    "FiniteBayesianGame",
    "GameInputError",
    "GeneralizedMultiGame",
    "MixedStrategy",
    "MultiGame",
    "NormalFormGame",
    "Prior",
    "SimplexPoint",
    "StrategyMapProfile",
    "bayesian_expected_utility",
    "double_game_type",
    "is_bne",
    "local_game",
    "mixed_payoff",
    "pure_payoff",
    "OwnTypeLinearGame",
    "TypeLinearGame",
    "equivalence_audit",
    "normalize_type",
    "to_generalized_mg",
    "to_mg",
    "NEResult",
    "best_response_set",
    "is_nash",
    "pure_ne_enumerate",
    "support_enumeration_2p",
    "DoubleGameSpec",
    "RegularityReport",
    "Witness",
    "check_prop1",
    "check_prop2",
    "extend_witness",
    "theorem1_audit",
    "verify_type_regularity",
    "vertex_regularity_search",
    "build_pd_dg",
    "build_trust_dg",
    "receiver_best_reply",
    "sender_threshold",
    "spe_with_belief",
]
