"""
Pydantic domain models.
"""

from .network_models import NetworkParams, ParamVector, StateVec, ExtState, Trajectory
from .markov_models import TransitionMatrix, StationaryDist, Lemma1Report, Score, ObjectiveReport
from .estimation_models import StepSchedule, EstimatorState, EstimationRun
from .experiment_models import ExperimentConfig, MseCurve

__all__ = [
    "NetworkParams",
    "ParamVector",
    "StateVec",
    "ExtState",
    "Trajectory",
    "TransitionMatrix",
    "StationaryDist",
    "Lemma1Report",
    "Score",
    "ObjectiveReport",
    "StepSchedule",
    "EstimatorState",
    "EstimationRun",
    "ExperimentConfig",
    "MseCurve",
]
