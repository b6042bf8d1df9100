from .game import Blame, GameTree, Outcome, Play, SurvivalCheck
from .model import (
    DecisionPoint,
    GoalSet,
    JointStrategy,
    Observation,
    ObservationClass,
    Strategy,
    describe_class,
    parts_of,
)
from .oracle import GroupOracle, Selector, build_oracles
from .search import (
    DEFAULT_CLASS_BOUND,
    DEFAULT_STRATEGY_BOUND,
    Achievement,
    AnyStrategy,
    achieved_names,
    decision_points,
    encode_strategy,
    enumerate_strategies,
    group_classes,
    is_winning,
    joint_strategies,
    max_achievable,
    strategy_count,
)

__all__ = [
    "DEFAULT_CLASS_BOUND",
    "DEFAULT_STRATEGY_BOUND",
    "Achievement",
    "AnyStrategy",
    "Blame",
    "DecisionPoint",
    "GameTree",
    "GoalSet",
    "GroupOracle",
    "JointStrategy",
    "Observation",
    "ObservationClass",
    "Outcome",
    "Play",
    "Selector",
    "Strategy",
    "SurvivalCheck",
    "achieved_names",
    "build_oracles",
    "decision_points",
    "describe_class",
    "encode_strategy",
    "enumerate_strategies",
    "group_classes",
    "is_winning",
    "joint_strategies",
    "max_achievable",
    "parts_of",
    "strategy_count",
]
