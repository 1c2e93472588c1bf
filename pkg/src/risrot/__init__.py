"""Joint precoder / reflect-weight / rotation optimization for a
rotatable-RIS multicast downlink, plus the Monte-Carlo harness that
reproduces its simulation study."""

from .channel import ChannelRealization, generate_channels
from .driver import AoConfig, AoTrace, SubproblemError, run_ao
from .harness import (ExperimentConfig, TrialRecord, run_experiment,
                      summarize)
from .orientation import PsoParams, exhaustive_rotation, pso_rotation
from .rates import Solution, objective, user_rates
from .scene import Scene, SceneConfig, generate_scene

__all__ = [
    "AoConfig", "AoTrace", "ChannelRealization", "ExperimentConfig",
    "PsoParams", "Scene", "SceneConfig", "Solution", "SubproblemError",
    "TrialRecord", "exhaustive_rotation", "generate_channels",
    "generate_scene", "objective", "pso_rotation", "run_ao",
    "run_experiment", "summarize", "user_rates",
]

__version__ = "0.1.0"
