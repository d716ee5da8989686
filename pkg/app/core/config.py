import os
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, field_validator

load_dotenv()

TOOL_VERSION = "0.1.0"

DEFAULT_ENUMERATION_CAP = 10**6
BRUTE_FORCE_CAP = 10**7
DEFAULT_SEED = 0

# Parallel workers for profile screening; results never depend on it
N_JOBS = int(os.getenv("SIGNALOPT_N_JOBS", "1"))
LOG_LEVEL = os.getenv("SIGNALOPT_LOG_LEVEL", "WARNING")

FEASIBILITY_EPS = 1e-7
DROP_EPS = 1e-12
VERIFY_EPS = 1e-6
PIVOT_EPS = 1e-9


class Tolerances(BaseModel):
    """Numerical slack shared by the LP engine, the equilibrium checks and scheme validation."""
    model_config = ConfigDict(frozen=True)

    feasibility_eps: float = FEASIBILITY_EPS
    drop_eps: float = DROP_EPS
    verify_eps: float = VERIFY_EPS
    pivot_eps: float = PIVOT_EPS

    @field_validator("feasibility_eps", "drop_eps", "verify_eps", "pivot_eps")
    @classmethod
    def _positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("tolerances must be positive")
        return value


DEFAULT_TOLERANCES = Tolerances()
