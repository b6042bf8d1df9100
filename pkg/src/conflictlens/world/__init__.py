from .explicit import Transitions, check_integrity, initial_states, runs, state_of
from .model import (
    AGENTS,
    ActionAlphabet,
    Assignment,
    JointAction,
    State,
    StateVar,
    TransitionRule,
    WorldModel,
    firing_rules,
    successor,
    value_atom,
)
from .possible import (
    MODEL_ATOM,
    EvidenceTheory,
    PossibleWorldSet,
    WorldGroup,
    build_possible_worlds,
    histories,
)
from .unroll import Unrolling, WorldTheory, unroll

__all__ = [
    "AGENTS",
    "MODEL_ATOM",
    "ActionAlphabet",
    "Assignment",
    "EvidenceTheory",
    "JointAction",
    "PossibleWorldSet",
    "State",
    "StateVar",
    "TransitionRule",
    "Transitions",
    "Unrolling",
    "WorldGroup",
    "WorldModel",
    "WorldTheory",
    "build_possible_worlds",
    "check_integrity",
    "firing_rules",
    "histories",
    "initial_states",
    "runs",
    "state_of",
    "successor",
    "unroll",
    "value_atom",
]
