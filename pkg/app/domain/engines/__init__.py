"""Domain engines - pure solver engines."""

from app.domain.engines.tabular_engine import TabularEngine
from app.domain.engines.tv_backup_engine import TVBackupEngine
from app.domain.engines.linear_program import DenseSimplex, GameSolution, LPSolution, solve_matrix_game
from app.domain.engines.sc_engine import SaddlePoint, SCEngine
from app.domain.engines.hard_instance import HardInstance

__all__ = [
    "TabularEngine",
    "TVBackupEngine",
    "DenseSimplex",
    "GameSolution",
    "LPSolution",
    "solve_matrix_game",
    "SaddlePoint",
    "SCEngine",
    "HardInstance",
]
