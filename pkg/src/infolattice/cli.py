"""
Main CLI entry point for infolattice.
"""

import logging
from pathlib import Path

import typer
from rich.console import Console
from rich.logging import RichHandler

from infolattice import __version__
from infolattice.config import InputKind, MeasureName, OutputFormat

app = typer.Typer(
    name="infolattice",
    help="Information measures and Möbius dualities on power-set lattices",
    add_completion=False,
)
console = Console()

INPUT = typer.Option(None, "--input", "-i", help="Sample file or pmf file")
KIND = typer.Option(InputKind.PMF, "--kind", help="Input kind: samples|pmf")
LOG_BASE = typer.Option("2", "--log-base", help="Logarithm base, a number or 'e'")
TOL_EXACT = typer.Option(None, "--tol-exact", help="Relative tolerance of transform identities")
TOL_DIST = typer.Option(None, "--tol-dist", help="Absolute tolerance of measure identities")
MAX_N = typer.Option(None, "--max-n", help="Largest number of variables accepted")
OUT = typer.Option(None, "--out", "-o", help="Write to this file instead of stdout")
CARD = typer.Option([], "--card", help="Declared cardinality NAME=K (repeatable, samples only)")


@app.callback()
def main_options(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log computation details"),
) -> None:
    """
    Compute entropy, interaction and multi-information over every variable
    subset and check the identities that link them.
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


@app.command()
def ingest(
    input_path: Path = typer.Option(..., "--input", "-i", help="Comma-separated sample file"),
    out: Path | None = OUT,
    card: list[str] = CARD,
    max_n: int | None = MAX_N,
) -> None:
    """
    Estimate a pmf from categorical samples and write it as a pmf file.

    Examples:

        infolattice ingest --input samples.csv --out joint.json

        infolattice ingest -i samples.csv --card X1=3 --card X2=2
    """
    from infolattice.commands import build_config, cmd_ingest, parse_cardinalities

    cardinalities = parse_cardinalities(card)
    config = build_config(input_path=input_path, kind=InputKind.SAMPLES, out=out, max_n=max_n)
    cmd_ingest(config, cardinalities)


@app.command()
def table(
    input_path: Path | None = INPUT,
    kind: InputKind = KIND,
    log_base: str = LOG_BASE,
    max_n: int | None = MAX_N,
    output_format: OutputFormat = typer.Option(
        OutputFormat.TABLE, "--format", "-f", help="Output format: table|records"
    ),
    out: Path | None = OUT,
    card: list[str] = CARD,
) -> None:
    """
    Show H, I, M and the incoming Δ weights of every lattice node.
    """
    from infolattice.commands import build_config, cmd_table, parse_cardinalities

    cardinalities = parse_cardinalities(card)
    config = build_config(
        input_path=input_path,
        kind=kind,
        log_base=log_base,
        max_n=max_n,
        output_format=output_format,
        out=out,
    )
    cmd_table(config, cardinalities)


@app.command()
def verify(
    input_path: Path | None = INPUT,
    kind: InputKind = KIND,
    log_base: str = LOG_BASE,
    tol_exact: float | None = TOL_EXACT,
    tol_dist: float | None = TOL_DIST,
    max_n: int | None = MAX_N,
    output_format: OutputFormat = typer.Option(
        OutputFormat.TABLE, "--format", "-f", help="Output format: table|records"
    ),
    out: Path | None = OUT,
    card: list[str] = CARD,
) -> None:
    """
    Check every duality and sum-rule identity on a distribution.

    Exits with status 1 if any identity family exceeds its tolerance.
    """
    from infolattice.commands import build_config, cmd_verify, parse_cardinalities

    cardinalities = parse_cardinalities(card)
    config = build_config(
        input_path=input_path,
        kind=kind,
        log_base=log_base,
        tol_exact=tol_exact,
        tol_dist=tol_dist,
        max_n=max_n,
        output_format=output_format,
        out=out,
    )
    cmd_verify(config, cardinalities)


@app.command()
def rules(
    measure: MeasureName = typer.Option(
        MeasureName.INTERACTION, "--measure", "-m", help="Lattice function: H|I|M"
    ),
    start: str | None = typer.Option(
        None, "--from", help="Start node, e.g. 'X1' (default: every singleton)"
    ),
    end: str | None = typer.Option(None, "--to", help="End node, e.g. 'X1,X2,X3' (default: all)"),
    input_path: Path | None = INPUT,
    kind: InputKind = KIND,
    log_base: str = LOG_BASE,
    tol_dist: float | None = TOL_DIST,
    max_n: int | None = MAX_N,
    output_format: OutputFormat = typer.Option(
        OutputFormat.TABLE, "--format", "-f", help="Output format: table|records"
    ),
    out: Path | None = OUT,
    card: list[str] = CARD,
) -> None:
    """
    Check chain sum rules on H, I or M and report every rule instance.

    Exits with status 1 if a rule's residual reaches the tolerance.

    Examples:

        infolattice rules --input joint.json

        infolattice rules -i joint.json --measure H --from X1 --to X1,X2,X3 -f records
    """
    from infolattice.commands import build_config, cmd_rules, parse_cardinalities

    cardinalities = parse_cardinalities(card)
    config = build_config(
        input_path=input_path,
        kind=kind,
        log_base=log_base,
        tol_dist=tol_dist,
        max_n=max_n,
        output_format=output_format,
        out=out,
    )
    cmd_rules(config, measure, start, end, cardinalities)


@app.command()
def export(
    n: int | None = typer.Option(None, "--n", help="Number of variables of a bare lattice"),
    input_path: Path | None = INPUT,
    kind: InputKind = KIND,
    log_base: str = LOG_BASE,
    max_n: int | None = MAX_N,
    output_format: OutputFormat = typer.Option(
        OutputFormat.DOT, "--format", "-f", help="Output format: dot|records"
    ),
    out: Path | None = OUT,
    card: list[str] = CARD,
) -> None:
    """
    Export the power-set lattice as DOT or JSON.

    With --input, nodes carry H and I and edges carry Δ.

    Examples:

        infolattice export --n 3 | dot -Tsvg > lattice.svg

        infolattice export --input joint.json --format records
    """
    from infolattice.commands import build_config, cmd_export_lattice, parse_cardinalities

    cardinalities = parse_cardinalities(card)
    config = build_config(
        input_path=input_path,
        kind=kind,
        log_base=log_base,
        max_n=max_n,
        output_format=output_format,
        out=out,
    )
    cmd_export_lattice(config, n, cardinalities)


@app.command()
def cancellation(
    n: int = typer.Option(3, "--n", help="Number of variables (1-6)"),
    out: Path | None = OUT,
) -> None:
    """
    Print the table of signed terms whose rows cancel in the double subset sum.
    """
    from infolattice.commands import cmd_cancellation

    cmd_cancellation(n, out)


@app.command()
def version() -> None:
    """
    Show infolattice version.
    """
    console.print(f"infolattice version {__version__}", style="bold green")


def main() -> None:
    """Entry point for the CLI."""
    app()


if __name__ == "__main__":
    main()
