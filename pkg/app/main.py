import logging
import sys
from typing import Optional, Sequence

import click
from pydantic import ValidationError

from app.core.config import BRUTE_FORCE_CAP, DEFAULT_ENUMERATION_CAP, DEFAULT_SEED, LOG_LEVEL, TOOL_VERSION
from app.core.errors import InstanceValidationError, SignalOptError, UnsupportedInstanceError, VerificationFailedError
from app.lib.auctions.brute_force import brute_force_auction
from app.lib.auctions.sampling import solve_auction_sampled
from app.lib.auctions.signaling import GroundSet, solve_auction_signaling
from app.lib.auctions.welfare import welfare_of_scheme
from app.lib.auctions.winner_net import WinnerNetParams
from app.lib.games.brute_force import brute_force_game_opt
from app.lib.games.equilibrium_net import EquilibriumConcept
from app.lib.games.signaling import GameSolveOptions, solve_game_signaling
from app.lib.instance_io import (
    auction_scheme_document, game_scheme_document, parse_instance, parse_prior, parse_sampler_spec,
    read_scheme_document, write_document,
)
from app.lib.model import AuctionInstance, BayesianGame
from app.lib.verify import verify_scheme

logger = logging.getLogger("signalopt")

CONCEPTS = click.Choice([c.value for c in EquilibriumConcept])


def _load(path: str, kind: type):
    instance = parse_instance(path)
    if not isinstance(instance, kind):
        raise UnsupportedInstanceError(f"{path} is not a {kind.__name__} instance")
    return instance


def _resolve_k(k: Optional[int], auction: AuctionInstance) -> int:
    k = k if k is not None else auction.num_signals
    if k is None:
        raise click.UsageError("-k is required when the instance has no num_signals")
    return k


def _winner_params(override: Optional[int], auction: Optional[AuctionInstance], epsilon: float,
                   cap: int) -> WinnerNetParams:
    try:
        return WinnerNetParams.resolve(override, auction, epsilon, cap)
    except ValidationError as exc:
        raise InstanceValidationError(exc.errors()[0]["msg"], field="net_multiset_size") from exc


@click.group()
@click.version_option(TOOL_VERSION, prog_name="signalopt")
@click.option("-v", "--verbose", count=True, help="-v for info, -vv for debug logging on stderr.")
def cli(verbose: int):
    """Near-optimal signaling schemes for Bayesian games and second-price auctions."""
    level = {0: LOG_LEVEL, 1: "INFO"}.get(verbose, "DEBUG")
    logging.basicConfig(stream=sys.stderr, level=level, force=True,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


@cli.command("solve-game")
@click.argument("instance", type=click.Path(dir_okay=False))
@click.option("--epsilon", type=float, required=True)
@click.option("--delta", type=float, default=0.0, show_default=True)
@click.option("--concept", type=CONCEPTS, default="ne", show_default=True)
@click.option("--net-size", type=int, default=None, help="Multiset size s; defaults to the formula value.")
@click.option("--stackelberg-leader", type=int, default=None, help="0-based index of the committed player.")
@click.option("--reduce-signals", is_flag=True, help="Drop signals until the posteriors are affinely independent.")
@click.option("--cap", type=int, default=DEFAULT_ENUMERATION_CAP, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def solve_game(instance, epsilon, delta, concept, net_size, stackelberg_leader, reduce_signals, cap, out):
    """Compute an approximately optimal symmetric scheme for a Bayesian game."""
    game = _load(instance, BayesianGame)
    try:
        opts = GameSolveOptions(epsilon=epsilon, delta=delta, concept=concept, net_size=net_size,
                                stackelberg_leader=stackelberg_leader, reduce_signals=reduce_signals,
                                enumeration_cap=cap)
    except ValidationError as exc:
        error = exc.errors()[0]
        raise InstanceValidationError(error["msg"], field=".".join(map(str, error["loc"]))) from exc
    result = solve_game_signaling(game, opts)
    if out:
        write_document(game_scheme_document(result, game), out)
    click.echo(f"objective={result.objective:.6f} signals={result.scheme.num_signals} "
               f"profiles={result.net.profiles_kept}/{result.net.profiles_total} "
               f"time={result.elapsed_sec:.3f}s")


@cli.command("solve-auction")
@click.argument("instance", type=click.Path(dir_okay=False))
@click.option("-k", "k", type=int, default=None, help="Number of signals; defaults to num_signals in the file.")
@click.option("--epsilon", type=float, default=0.3, show_default=True)
@click.option("--net-multiset-size", type=int, default=None)
@click.option("--ground", type=click.Choice([g.value for g in GroundSet]), default=GroundSet.NET.value,
              show_default=True)
@click.option("--lazy", is_flag=True, help="Lazy greedy; selects the same tuples.")
@click.option("--cap", type=int, default=DEFAULT_ENUMERATION_CAP, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def solve_auction(instance, k, epsilon, net_multiset_size, ground, lazy, cap, out):
    """Choose k signals for a second-price auction."""
    auction = _load(instance, AuctionInstance)
    k = _resolve_k(k, auction)
    params = _winner_params(net_multiset_size, auction, epsilon, cap)
    result = solve_auction_signaling(auction, k, epsilon, params, GroundSet(ground), lazy=lazy)
    if out:
        write_document(auction_scheme_document(result, auction), out)
    click.echo(f"welfare={result.welfare:.6f} signals={len(result.winner_tuples)} "
               f"ground={result.ground_size} time={result.elapsed_sec:.3f}s")


@cli.command("solve-auction-sampled")
@click.argument("sampler_spec")
@click.option("-k", "k", type=int, required=True)
@click.option("--epsilon", type=float, required=True)
@click.option("--delta", type=float, required=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--prior", default=None, help="Comma-separated prior; uniform when omitted.")
@click.option("--net-multiset-size", type=int, default=None)
@click.option("--lazy", is_flag=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def solve_auction_sampled_cmd(sampler_spec, k, epsilon, delta, seed, prior, net_multiset_size, lazy, out):
    """
    Solve on an empirical distribution drawn from SAMPLER_SPEC, which is
    uniform-iid:n=<n>,M=<M> or mixture:<auction instance>.
    """
    spec = parse_sampler_spec(sampler_spec)
    if spec.source is not None and prior is None:
        prior_vec = spec.source.prior
    else:
        prior_vec = parse_prior(prior, spec.num_states)
    params = None
    if net_multiset_size is not None:
        params = _winner_params(net_multiset_size, None, epsilon, DEFAULT_ENUMERATION_CAP)
    result = solve_auction_sampled(spec.sampler, prior_vec, k, epsilon, delta, seed, params, lazy=lazy)

    true_welfare = None
    if spec.source is not None and prior is None:
        true_welfare = welfare_of_scheme(spec.source, result.assignment)
    if out:
        write_document(auction_scheme_document(result, welfare=true_welfare), out)
    summary = f"empirical_welfare={result.welfare:.6f}"
    if true_welfare is not None:
        summary += f" welfare={true_welfare:.6f}"
    click.echo(f"{summary} samples={result.num_samples} seed={seed} time={result.elapsed_sec:.3f}s")


@cli.command("verify")
@click.argument("instance", type=click.Path(dir_okay=False))
@click.argument("scheme", type=click.Path(dir_okay=False))
def verify(instance, scheme):
    """Recheck a scheme document against an instance."""
    report = verify_scheme(parse_instance(instance), read_scheme_document(scheme))
    if not report.ok:
        for failure in report.failures:
            click.echo(f"FAIL {failure}", err=True)
        raise VerificationFailedError(f"{len(report.failures)} check(s) failed")
    click.echo("OK")


@cli.command("brute-auction")
@click.argument("instance", type=click.Path(dir_okay=False))
@click.option("-k", "k", type=int, default=None)
@click.option("--cap", type=int, default=BRUTE_FORCE_CAP, show_default=True)
def brute_auction(instance, k, cap):
    """Exact optimum by enumerating every assignment of states to signals."""
    auction = _load(instance, AuctionInstance)
    result = brute_force_auction(auction, _resolve_k(k, auction), cap)
    click.echo(f"welfare={result.welfare:.6f} assignment={list(result.assignment)}")


@cli.command("brute-game")
@click.argument("instance", type=click.Path(dir_okay=False))
@click.option("--epsilon", type=float, required=True)
@click.option("--delta", type=float, default=0.0, show_default=True)
@click.option("--grid", type=int, default=50, show_default=True)
@click.option("--concept", type=CONCEPTS, default="ne", show_default=True)
@click.option("--net-size", type=int, default=None)
@click.option("--stackelberg-leader", type=int, default=None)
def brute_game(instance, epsilon, delta, grid, concept, net_size, stackelberg_leader):
    """Grid search over two-signal splits of a two-state game."""
    game = _load(instance, BayesianGame)
    excluded = frozenset() if stackelberg_leader is None else frozenset({stackelberg_leader})
    result = brute_force_game_opt(game, epsilon, delta, EquilibriumConcept(concept), grid,
                                  net_size, excluded)
    click.echo(f"value={result.value:.6f} weights={list(result.weights)}")


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and map errors to exit codes: 1 usage, 2 input, 3 solver, 4 verification."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="signalopt",
                      standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except SignalOptError as exc:
        logger.debug("command failed", exc_info=True)
        click.echo(f"error: {exc}", err=True)
        return exc.exit_code
    return rv if isinstance(rv, int) else 0
