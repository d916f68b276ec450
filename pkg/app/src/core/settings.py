from pydantic import BaseModel, ConfigDict


class Settings(BaseModel):
    """Library-wide numerical defaults."""
    model_config = ConfigDict(frozen=True)

    # Dense storage caps
    MAX_SIMULATION_AGENTS: int = 20
    MAX_BASE_AGENTS: int = 10
    MAX_EXTENDED_AGENTS: int = 6

    # Stationary distribution solver
    STATIONARY_TOL: float = 1e-12
    STATIONARY_MAX_ITER: int = 1_000_000
    DIRECT_SOLVE_MAX_DIM: int = 256

    # Kernel / likelihood checks
    ROW_SUM_TOL: float = 1e-12
    DEGENERATE_MASS: float = 1e-14
    LEMMA1_TOL: float = 1e-8
    OBJECTIVE_GRAD_TOL: float = 1e-8
    RECOVERY_TOL: float = 1e-6
    BURN_IN: int = 1000

    # Estimator defaults
    SCHEDULE_A: float = 10.0
    SCHEDULE_B: float = 200.0
    PROJECTION_BOUND: float = 100.0
    SNAPSHOT_EVERY: int = 100

    # Simulation
    SIMULATION_CHUNK: int = 65536

    # Application settings
    APP_NAME: str = "binnet"
    VERSION: str = "1.0.0"


# Create settings instance
settings = Settings()
