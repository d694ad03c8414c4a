# Use cases

from app.application.use_cases.solve_model import SolveModelUseCase, SolveOutcome, load_model
from app.application.use_cases.verify_theorem2 import SIGMA2_GRID, VerifyTheorem2UseCase
from app.application.use_cases.train_agent import TrainAgentUseCase, TrainOutcome
from app.application.use_cases.evaluate_agent import EvaluateAgentUseCase
from app.application.use_cases.sweep_beta import SweepBetaUseCase, SweepOutcome
from app.application.use_cases.compare_augmenters import AugmenterComparisonRow, CompareAugmentersUseCase
from app.application.use_cases.generate_hard_instance import GenerateHardInstanceUseCase

__all__ = [
    "SolveModelUseCase",
    "SolveOutcome",
    "load_model",
    "SIGMA2_GRID",
    "VerifyTheorem2UseCase",
    "TrainAgentUseCase",
    "TrainOutcome",
    "EvaluateAgentUseCase",
    "SweepBetaUseCase",
    "SweepOutcome",
    "AugmenterComparisonRow",
    "CompareAugmentersUseCase",
    "GenerateHardInstanceUseCase",
]
