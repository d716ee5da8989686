"""
Reading and writing instance and scheme documents.

Documents are JSON with a "kind" discriminator. Parsed instances are always
validated, so zero-mass states are already gone; scheme documents are written
in the original state space.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from app.core.errors import InstanceValidationError, MalformedDocumentError
from app.lib.auctions.sampling import MixtureSampler, Sampler, UniformIidSampler
from app.lib.auctions.signaling import AuctionSolveResult
from app.lib.games.signaling import GameSolveResult
from app.lib.model import (
    AuctionInstance, BayesianGame, Instance, expand_assignment, expand_scheme, validate_instance,
)
from app.schemas.instance import AuctionInstanceFile, GameInstanceFile, instance_adapter
from app.schemas.scheme import (
    AuctionSchemeFile, GameSchemeFile, GameSignalOut, GameSolverMetadata, scheme_adapter,
)

logger = logging.getLogger(__name__)

DocumentPath = Union[str, Path]


def _field_error(exc: ValidationError) -> MalformedDocumentError:
    error = exc.errors()[0]
    loc = [str(part) for part in error["loc"]]
    if loc and loc[0] in ("game", "auction"):
        loc = loc[1:]
    return MalformedDocumentError(error["msg"], field=".".join(loc) or None)


def _read_text(path: DocumentPath) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise MalformedDocumentError(f"cannot read {path}: {exc.strerror}") from exc


def read_instance_document(path: DocumentPath) -> Union[GameInstanceFile, AuctionInstanceFile]:
    try:
        return instance_adapter.validate_json(_read_text(path))
    except ValidationError as exc:
        raise _field_error(exc) from exc


def parse_instance(path: DocumentPath) -> Instance:
    """
    Read, parse and validate an instance document.

    Args:
        path: JSON instance file

    Returns:
        BayesianGame or AuctionInstance with zero-mass states removed

    Raises:
        MalformedDocumentError: unreadable file, bad JSON or a schema violation
        InstanceValidationError: values outside their ranges or inconsistent shapes
    """
    document = read_instance_document(path)
    instance = validate_instance(document.to_domain())
    logger.info("loaded %s instance from %s", document.kind, path)
    return instance


def instance_document(instance: Instance) -> BaseModel:
    if isinstance(instance, BayesianGame):
        return GameInstanceFile.from_domain(instance)
    return AuctionInstanceFile.from_domain(instance)


def serialize_instance(instance: Instance) -> str:
    return instance_document(instance).model_dump_json(indent=2) + "\n"


def read_scheme_document(path: DocumentPath) -> Union[GameSchemeFile, AuctionSchemeFile]:
    try:
        return scheme_adapter.validate_json(_read_text(path))
    except ValidationError as exc:
        raise _field_error(exc) from exc


def write_document(document: BaseModel, path: DocumentPath):
    Path(path).write_text(document.model_dump_json(indent=2) + "\n")


def game_scheme_document(result: GameSolveResult, game: BayesianGame) -> GameSchemeFile:
    scheme = expand_scheme(result.scheme, game)
    opts = result.options
    return GameSchemeFile(
        signals=[
            GameSignalOut(alpha=float(alpha), posterior=mu.tolist(), profile=profile.to_lists(),
                          objective_value=float(value))
            for alpha, mu, profile, value in zip(scheme.weights, scheme.posteriors,
                                                 scheme.profiles, scheme.values)
        ],
        objective=result.objective,
        metadata=GameSolverMetadata(
            epsilon=opts.epsilon,
            delta=opts.delta,
            concept=opts.concept,
            net_size=result.net.multiset_size,
            stackelberg_leader=opts.stackelberg_leader,
            reduced=opts.reduce_signals,
        ),
    )


def auction_scheme_document(result: AuctionSolveResult, auction: Optional[AuctionInstance] = None,
                            welfare: Optional[float] = None) -> AuctionSchemeFile:
    """`welfare` overrides the solver's value, e.g. with the true welfare of a sampled scheme."""
    assignment = list(expand_assignment(result.assignment, auction)) if auction is not None \
        else list(result.assignment)
    return AuctionSchemeFile(
        assignment=assignment,
        welfare=result.welfare if welfare is None else welfare,
        empirical_welfare=result.welfare if result.num_samples is not None else None,
        winner_tuples=[list(w) for w in result.winner_tuples],
        k=result.num_signals,
        net_multiset_size=result.multiset_size,
        seed=result.seed,
        num_samples=result.num_samples,
    )


@dataclass(frozen=True, eq=False)
class SamplerSpec:
    sampler: Sampler
    num_bidders: int
    num_states: int
    # the finite distribution behind a mixture sampler, when there is one
    source: Optional[AuctionInstance] = None


def parse_sampler_spec(spec: str) -> SamplerSpec:
    """`uniform-iid:n=<n>,M=<M>` or `mixture:<path to an auction instance>`."""
    name, _, arg = spec.partition(":")
    if name == "uniform-iid":
        try:
            fields = dict(part.split("=", 1) for part in arg.split(",") if part)
            n, num_states = int(fields["n"]), int(fields["M"])
        except (KeyError, ValueError) as exc:
            raise InstanceValidationError(
                f"expected uniform-iid:n=<n>,M=<M>, got {spec!r}", field="sampler") from exc
        if n < 1 or num_states < 1:
            raise InstanceValidationError("n and M must be positive", field="sampler")
        return SamplerSpec(UniformIidSampler(n, num_states), n, num_states)
    if name == "mixture":
        auction = parse_instance(arg)
        if not isinstance(auction, AuctionInstance):
            raise InstanceValidationError("mixture sampler needs an auction instance", field="sampler")
        if auction.state_index is not None:
            raise InstanceValidationError("mixture sampler instance has zero-mass states", field="prior")
        return SamplerSpec(MixtureSampler.from_auction(auction), auction.num_bidders,
                           auction.num_states, source=auction)
    raise InstanceValidationError(f"unknown sampler {name!r}", field="sampler")


def parse_prior(text: Optional[str], num_states: int) -> np.ndarray:
    if text is None:
        return np.full(num_states, 1.0 / num_states)
    try:
        prior = np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise InstanceValidationError(f"cannot parse prior {text!r}", field="prior") from exc
    if prior.shape != (num_states,):
        raise InstanceValidationError(f"expected {num_states} entries, got {prior.size}", field="prior")
    return prior
