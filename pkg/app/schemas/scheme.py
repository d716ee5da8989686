from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter

from app.core.config import TOOL_VERSION
from app.lib.games.equilibrium_net import EquilibriumConcept


class GameSignalOut(BaseModel):
    alpha: float
    posterior: List[float]
    # profile[i] is player i's mixed strategy
    profile: List[List[float]]
    objective_value: float


class GameSolverMetadata(BaseModel):
    epsilon: float
    delta: float
    concept: EquilibriumConcept
    net_size: int
    stackelberg_leader: Optional[int] = None
    reduced: bool = False
    tool_version: str = TOOL_VERSION


class GameSchemeFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["game"] = "game"
    signals: List[GameSignalOut]
    objective: float
    metadata: GameSolverMetadata


class AuctionSchemeFile(BaseModel):
    """assignment[theta] is the 0-based signal sent in state theta."""
    model_config = ConfigDict(extra="forbid")

    kind: Literal["auction"] = "auction"
    assignment: List[int]
    welfare: float
    # welfare on the sampled distribution, for schemes built from samples
    empirical_welfare: Optional[float] = None
    winner_tuples: List[List[int]]
    k: int = Field(ge=1)
    net_multiset_size: Optional[int] = None
    seed: Optional[int] = None
    num_samples: Optional[int] = None
    tool_version: str = TOOL_VERSION


SchemeFile = Annotated[Union[GameSchemeFile, AuctionSchemeFile], Field(discriminator="kind")]
scheme_adapter = TypeAdapter(SchemeFile)
