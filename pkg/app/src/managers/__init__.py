"""
Experiment orchestration.
"""

from .experiment_manager import ExperimentManager, mse_curve, merge_mse_curves

__all__ = ["ExperimentManager", "mse_curve", "merge_mse_curves"]
