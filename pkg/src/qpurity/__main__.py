"""Main command line."""
from contextlib import contextmanager
from sys import exit

import click

from qpurity import QPURITY_LOG_NAME, __version__, logger
from qpurity.config import load as load_config
from qpurity.defaults import DEFAULT_CONFIG_PATH
from qpurity.errors import QpurityError
from qpurity.helper.custom_enums import OutputFormat

version_text = "Version: " + __version__ + "\n\n"
help_header = (
    version_text
    + """Estimate the purity of a quantum state from noisy homodyne tomography data.

List the catalogued states:

  $ qpurity states

Simulate noisy samples and estimate their purity:

  $ qpurity simulate --state thermal --beta 1 -n 20000
  $ qpurity estimate samples.csv --state thermal --beta 1

Check rates and normality by Monte Carlo:

  $ qpurity experiment --state vacuum

"""
)

""" Exit code of I/O failures """
IO_EXIT_CODE = 4

""" Exit code of invalid arguments """
CONFIG_EXIT_CODE = 2


@contextmanager
def handle_errors():
    """Log library errors and exit with their code."""
    try:
        yield
    except QpurityError as err:
        logger.error("%s: %s", type(err).__name__, err)
        exit(err.exit_code)
    except OSError as err:
        logger.error("%s: %s", type(err).__name__, err)
        exit(IO_EXIT_CODE)
    except ValueError as err:
        logger.error("%s", err)
        exit(CONFIG_EXIT_CODE)


def state_options(func):
    """Options naming a catalogued state."""
    options = [
        click.option("-s", "--state", type=click.STRING, help="Catalogued state, see `qpurity states`"),
        click.option("--x0", type=click.FLOAT, help="Cat state displacement"),
        click.option("--nbar", type=click.FLOAT, help="Mean photon number of a coherent state"),
        click.option("--xi", type=click.FLOAT, help="Squeezing parameter"),
        click.option("--disp", type=click.FLOAT, help="Displacement of a squeezed state"),
        click.option("--beta", type=click.FLOAT, help="Inverse temperature of a thermal state"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def rule_options(func):
    """Options of the bandwidth rules."""
    options = [
        click.option("--rule", type=click.STRING, help="Bandwidth rule"),
        click.option("--delta", type=click.FLOAT, help="Bandwidth of the fixed rule"),
        click.option("--alpha", type=click.FLOAT, help="Class decay α"),
        click.option("-r", "--r", "r", type=click.FLOAT, help="Class exponent r in (0, 2]"),
        click.option("-L", "--L", "L", type=click.FLOAT, help="Class radius L"),
        click.option("-A", "--A", "A", type=click.FLOAT, help="Constant of the adaptive2 rule"),
        click.option("-k", "--k", "k", type=click.INT, help="Refinements of the iterative rule"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@click.group(help=help_header)
@click.version_option(
    __version__,
    "-V",
    "--version",
    message="%(prog)s, version %(version)s",
    help="Show the version and exit.",
)
@click.help_option(help="Show this message and exit.")
@click.option(
    "--debug/--no-debug",
    default=False,
    help="Print debug information, used for development",
)
@click.option(
    "--config",
    default=DEFAULT_CONFIG_PATH,
    help="Path to the JSON configuration file, defaults to qpurity.json",
)
@click.option("--seed", type=click.INT, help="Seed of every random stream")
@click.option("--out", type=click.Path(file_okay=False), help="Output directory")
@click.option("--threads", type=click.INT, help="Maximum number of worker processes")
@click.pass_context
def cli(ctx, debug, config, seed, out, threads):
    """CLI entry point."""
    ctx.ensure_object(dict)
    ctx.obj["DEBUG"] = debug
    if debug:
        logger.setLevel("DEBUG")
    else:
        logger.setLevel("INFO")

    with handle_errors():
        ctx.obj["CONFIG"] = load_config(config).override(seed=seed, out=out, threads=threads)
    logger.debug("Loaded configuration from %s", config)
    logger.debug("Capturing logs to %s", QPURITY_LOG_NAME)


@cli.command(help="List the catalogued states.")
@click.option(
    "--wrap/--no-wrap",
    default=True,
    help="Wrap table cells to the terminal width",
)
def states(wrap):
    """List the catalogued states."""
    from qpurity.commands.states import list_states

    list_states(wrap)


@cli.command(help="Simulate noisy homodyne samples of a state.")
@state_options
@click.option("--eta", type=click.FLOAT, help="Detection efficiency in (0, 1)")
@click.option("-n", "--n", "n", type=click.INT, help="Number of samples")
@click.option(
    "--method",
    type=click.Choice(["auto", "fast", "generic"]),
    help="Sampler: closed form when available, or inverse CDF",
)
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="CSV file to write, defaults to <out>/samples.csv")
@click.pass_context
def simulate(ctx, state, x0, nbar, xi, disp, beta, eta, n, method, output):
    """Simulate noisy homodyne samples."""
    from qpurity.commands.simulate import simulate_samples

    with handle_errors():
        config = ctx.obj["CONFIG"].override(
            state=state, x0=x0, nbar=nbar, xi=xi, disp=disp, beta=beta, eta=eta, n=n, method=method
        )
        simulate_samples(config, output)


@cli.command(help="Estimate the purity of a sample file.")
@click.argument("samples", type=click.Path(dir_okay=False), required=False)
@state_options
@rule_options
@click.option("--eta", type=click.FLOAT, help="Detection efficiency in (0, 1)")
@click.option("--tau", type=click.FLOAT, help="Add a pure/mixed verdict with this threshold")
@click.option("--dt", type=click.FLOAT, help="Override the quadrature spacing")
@click.pass_context
def estimate(ctx, samples, state, x0, nbar, xi, disp, beta, rule, delta, alpha, r, L, A, k, eta, tau, dt):
    """Estimate the purity of a sample file."""
    from qpurity.commands.estimate import estimate

    with handle_errors():
        config = ctx.obj["CONFIG"].override(
            samples=samples,
            state=state,
            x0=x0,
            nbar=nbar,
            xi=xi,
            disp=disp,
            beta=beta,
            rule=rule,
            delta=delta,
            alpha=alpha,
            r=r,
            L=L,
            A=A,
            k=k,
            eta=eta,
            tau=tau,
            dt=dt,
        )
        estimate(config, tau=tau)


@cli.command(help="Run the Monte Carlo experiment and write mse.csv, normality.csv and summary.json.")
@state_options
@rule_options
@click.option("--eta", type=click.FLOAT, help="Detection efficiency in (0, 1)")
@click.option("--n-grid", type=click.STRING, help="Comma separated, increasing sample sizes")
@click.option("-R", "--replicates", type=click.INT, help="Replicates per sample size")
@click.option("--normality-n", type=click.INT, help="Sample size of the normality check")
@click.option("--normality-replicates", type=click.INT, help="Replicates of the normality check")
@click.option(
    "--variance",
    type=click.Choice(["asymptotic", "exact"]),
    help="Standardise residuals by W or by the exact finite-n variance",
)
@click.option("--normality/--no-normality", default=True, help="Run the normality check")
@click.option("--wrap/--no-wrap", default=True, help="Wrap table cells to the terminal width")
@click.pass_context
def experiment(
    ctx,
    state,
    x0,
    nbar,
    xi,
    disp,
    beta,
    rule,
    delta,
    alpha,
    r,
    L,
    A,
    k,
    eta,
    n_grid,
    replicates,
    normality_n,
    normality_replicates,
    variance,
    normality,
    wrap,
):
    """Run the Monte Carlo experiment."""
    from qpurity.commands.experiment import experiment

    with handle_errors():
        grid = tuple(int(value) for value in n_grid.split(",") if value.strip()) if n_grid else None
        config = ctx.obj["CONFIG"].override(
            state=state,
            x0=x0,
            nbar=nbar,
            xi=xi,
            disp=disp,
            beta=beta,
            rule=rule,
            delta=delta,
            alpha=alpha,
            r=r,
            L=L,
            A=A,
            k=k,
            eta=eta,
            n_grid=grid,
            replicates=replicates,
            normality_n=normality_n,
            normality_replicates=normality_replicates,
            variance=variance,
        )
        experiment(config, normality=normality, wrap=wrap)


@cli.command(help="Print the bandwidth, rate and risk bounds of every applicable rule.")
@rule_options
@click.option("--eta", type=click.FLOAT, help="Detection efficiency in (0, 1)")
@click.option("-n", "--n", "n", type=click.INT, help="Sample size")
@click.option(
    "-f",
    "--format",
    default=OutputFormat.CONSOLE.name,
    help="Output format",
    type=click.Choice(OutputFormat.get_all(), case_sensitive=False),
)
@click.option("--wrap/--no-wrap", default=True, help="Wrap table cells to the terminal width")
@click.pass_context
def rates(ctx, rule, delta, alpha, r, L, A, k, eta, n, format, wrap):
    """Print the rates table."""
    from qpurity.commands.rates import rates

    with handle_errors():
        config = ctx.obj["CONFIG"].override(delta=delta, alpha=alpha, r=r, L=L, A=A, k=k, eta=eta, n=n, rule=rule)
        rates(config, OutputFormat[format.upper()], wrap)


if __name__ == "__main__":  # pragma: no cover
    cli()  # type: ignore
