from typing import Annotated, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter

from app.core.errors import InstanceValidationError
from app.lib.model import AuctionInstance, BayesianGame


class GameInstanceFile(BaseModel):
    """
    payoffs[i][theta] and objective[theta] are tensors over action profiles
    flattened row-major, player 1's action most significant.
    """
    model_config = ConfigDict(extra="forbid")

    kind: Literal["game"]
    num_players: int = Field(ge=1)
    num_actions: int = Field(ge=1)
    num_states: int = Field(ge=1)
    prior: List[float]
    payoffs: List[List[List[float]]]
    objective: List[List[float]]

    def to_domain(self) -> BayesianGame:
        return BayesianGame.from_flat(self.num_players, self.num_actions, self.num_states,
                                      self.prior, self.payoffs, self.objective)

    @classmethod
    def from_domain(cls, game: BayesianGame) -> "GameInstanceFile":
        n, num_states = game.num_players, game.num_states
        return cls(
            kind="game",
            num_players=n,
            num_actions=game.num_actions,
            num_states=num_states,
            prior=game.prior.tolist(),
            payoffs=game.payoffs.reshape(n, num_states, -1).tolist(),
            objective=game.objective.reshape(num_states, -1).tolist(),
        )


class ValuationEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    probability: float
    # matrix[i][theta]: bidder i's value for the item in state theta
    matrix: List[List[float]]


class AuctionInstanceFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["auction"]
    num_bidders: int = Field(ge=1)
    num_states: int = Field(ge=1)
    num_signals: Optional[int] = Field(default=None, ge=1)
    prior: List[float]
    valuations: List[ValuationEntry] = Field(min_length=1)

    def to_domain(self) -> AuctionInstance:
        if len(self.prior) != self.num_states:
            raise InstanceValidationError(
                f"expected length {self.num_states}, got {len(self.prior)}", field="prior")
        for t, entry in enumerate(self.valuations):
            if len(entry.matrix) != self.num_bidders or any(len(row) != self.num_states for row in entry.matrix):
                raise InstanceValidationError(
                    f"expected a {self.num_bidders} x {self.num_states} matrix", field=f"valuations[{t}].matrix")
        return AuctionInstance(
            prior=np.asarray(self.prior, dtype=float),
            valuations=np.asarray([entry.matrix for entry in self.valuations], dtype=float),
            probabilities=np.asarray([entry.probability for entry in self.valuations], dtype=float),
            num_signals=self.num_signals,
        )

    @classmethod
    def from_domain(cls, auction: AuctionInstance) -> "AuctionInstanceFile":
        return cls(
            kind="auction",
            num_bidders=auction.num_bidders,
            num_states=auction.num_states,
            num_signals=auction.num_signals,
            prior=auction.prior.tolist(),
            valuations=[ValuationEntry(probability=float(p), matrix=v.tolist())
                        for p, v in zip(auction.probabilities, auction.valuations)],
        )


InstanceFile = Annotated[Union[GameInstanceFile, AuctionInstanceFile], Field(discriminator="kind")]
instance_adapter = TypeAdapter(InstanceFile)
