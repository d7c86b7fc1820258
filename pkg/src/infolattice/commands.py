"""
Command implementations for the infolattice CLI.
"""

import logging
from collections.abc import Iterator, Mapping
from contextlib import contextmanager
from pathlib import Path
from typing import Any

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape

from infolattice.config import InputKind, MeasureName, OutputFormat, RunConfig
from infolattice.distributions import JointDistribution
from infolattice.errors import InfoLatticeError, LatticeError
from infolattice.lattice import PowerSetLattice

console = Console()
err_console = Console(stderr=True, soft_wrap=True)
logger = logging.getLogger(__name__)

EXIT_VERIFICATION_FAILED = 1
EXIT_BAD_INPUT = 2


@contextmanager
def input_errors() -> Iterator[None]:
    """
    Turn library and validation errors into a red message and exit status 2.

    Raises:
        typer.Exit: On any InfoLatticeError or pydantic ValidationError
    """
    try:
        yield
    except InfoLatticeError as e:
        err_console.print(f"[red]Error: {escape(str(e))}[/red]", highlight=False)
        raise typer.Exit(EXIT_BAD_INPUT) from None
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        message = escape(f"{where}: {first['msg']}")
        err_console.print(f"[red]Error: {message}[/red]", highlight=False)
        raise typer.Exit(EXIT_BAD_INPUT) from None


def build_config(**settings: Any) -> RunConfig:
    """Assemble a RunConfig from flag values, exiting with status 2 when they are invalid."""
    with input_errors():
        return RunConfig(**{k: v for k, v in settings.items() if v is not None})


def parse_cardinalities(raw: list[str]) -> dict[str, int]:
    """
    Parse repeated NAME=K options.

    Raises:
        typer.BadParameter: If an entry is malformed
    """
    out: dict[str, int] = {}
    for entry in raw:
        name, sep, value = entry.partition("=")
        if not sep or not name.strip():
            raise typer.BadParameter(f"expected NAME=K, got {entry!r}", param_hint="--card")
        try:
            out[name.strip()] = int(value)
        except ValueError:
            raise typer.BadParameter(
                f"cardinality for {name.strip()!r} must be an integer", param_hint="--card"
            ) from None
    return out


def load_distribution(
    config: RunConfig, cardinalities: Mapping[str, int] | None = None
) -> JointDistribution:
    """Read the configured input file as a validated distribution."""
    from infolattice.fileio import load_pmf, load_samples

    if config.input_path is None:
        raise LatticeError("no input file given (use --input)")
    if config.kind is InputKind.SAMPLES:
        d = load_samples(config.input_path, cardinalities)
    else:
        d = load_pmf(config.input_path)
    d.lattice(config.max_n)
    logger.info("loaded %d variables, support size %d", d.n, d.support_size)
    return d


def emit(text: str, out: Path | None) -> None:
    """Write a document to a file, or unchanged to stdout."""
    if out is None:
        typer.echo(text, nl=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    console.print(f"[green]✓ Wrote {out}[/green]", highlight=False)


def cmd_ingest(config: RunConfig, cardinalities: Mapping[str, int]) -> None:
    """
    Estimate a pmf from a sample file and write it as a pmf document.

    Args:
        config: Run configuration; input_path is the sample file
        cardinalities: Declared cardinalities overriding the observed ones
    """
    from infolattice.distributions import from_samples
    from infolattice.fileio import dump_pmf, infer_specs, read_samples, save_pmf

    with input_errors():
        if config.input_path is None:
            raise LatticeError("no sample file given (use --input)")
        names, rows = read_samples(config.input_path)
        d = from_samples(rows, infer_specs(names, rows, cardinalities))
        d.lattice(config.max_n)

    summary = f"Read {len(rows)} records over {d.n} variables; support size {d.support_size}"
    if config.out is None:
        err_console.print(summary, highlight=False)
        emit(dump_pmf(d), None)
        return
    console.print(summary, highlight=False)
    save_pmf(d, config.out)
    console.print(f"[green]✓ Wrote {config.out}[/green]", highlight=False)


def cmd_table(config: RunConfig, cardinalities: Mapping[str, int] | None = None) -> None:
    """
    Print H, I, M and the Δ weights of every node.

    Rows come in ascending mask order with values to nine decimals.
    """
    from infolattice.export import measure_records, measure_rich_table, render_records
    from infolattice.measures import measure_table

    with input_errors():
        if config.output_format is OutputFormat.DOT:
            raise LatticeError("the table command writes table or records; use export for DOT")
        d = load_distribution(config, cardinalities)
        table = measure_table(d, config.log_base, config.max_n)

    if config.output_format is OutputFormat.RECORDS:
        emit(render_records(measure_records(table)), config.out)
        return
    if config.out is not None:
        config.out.parent.mkdir(parents=True, exist_ok=True)
        with config.out.open("w") as handle:
            Console(file=handle, width=200).print(measure_rich_table(table, config.unit))
        console.print(f"[green]✓ Wrote {config.out}[/green]", highlight=False)
        return
    console.print(measure_rich_table(table, config.unit))


def cmd_verify(config: RunConfig, cardinalities: Mapping[str, int] | None = None) -> None:
    """
    Run every identity family against a distribution.

    Raises:
        typer.Exit: With status 1 if any family fails
    """
    from infolattice.export import render_records
    from infolattice.verify import run_verification, show_report

    with input_errors():
        if config.output_format is OutputFormat.DOT:
            raise LatticeError("the verify command writes table or records")
        d = load_distribution(config, cardinalities)
        report = run_verification(d, config)

    if config.output_format is OutputFormat.RECORDS:
        emit(render_records([family.as_record() for family in report.families]), config.out)
    else:
        show_report(report)
    if not report.passed:
        raise typer.Exit(EXIT_VERIFICATION_FAILED)


def parse_node(lattice: PowerSetLattice, raw: str) -> int:
    """
    Encode a comma-separated list of variable names; "" or "∅" is the empty set.

    Raises:
        LatticeError: If a name is not a variable of the lattice
    """
    names = [name.strip() for name in raw.split(",") if name.strip()]
    if names == ["∅"]:
        return 0
    return lattice.mask(names)


def cmd_rules(
    config: RunConfig,
    measure: MeasureName,
    start: str | None,
    end: str | None,
    cardinalities: Mapping[str, int] | None = None,
) -> None:
    """
    Report chain sum rules on H, I or M.

    Without a start node every singleton below ``end`` is a start and one
    canonical chain is checked per start. With a start node every chain from
    start to end is compared against the canonical one.

    Raises:
        typer.Exit: With status 1 if some rule's residual reaches tol_dist
    """
    from infolattice.export import render_records, sum_rule_rich_table
    from infolattice.lattice import members
    from infolattice.measures import measure_table
    from infolattice.sumrules import sum_rule_same_endpoint, sum_rule_same_endpoints

    with input_errors():
        if config.output_format is OutputFormat.DOT:
            raise LatticeError("the rules command writes table or records")
        d = load_distribution(config, cardinalities)
        table = measure_table(d, config.log_base, config.max_n)
        F = {
            MeasureName.ENTROPY: table.entropy,
            MeasureName.INTERACTION: table.interaction,
            MeasureName.MULTI: table.multi,
        }[measure]
        top = table.lattice.full if end is None else parse_node(table.lattice, end)
        if start is None:
            rules = sum_rule_same_endpoint(F, [1 << i for i in members(top)], top)
        else:
            rules = sum_rule_same_endpoints(F, parse_node(table.lattice, start), top)

    if config.output_format is OutputFormat.RECORDS:
        emit(render_records([rule.as_record(F) for rule in rules]), config.out)
    else:
        console.print(sum_rule_rich_table(rules, F, str(measure)))
    if any(rule.residual >= config.tol_dist for rule in rules):
        raise typer.Exit(EXIT_VERIFICATION_FAILED)


def cmd_export_lattice(
    config: RunConfig, n: int | None, cardinalities: Mapping[str, int] | None = None
) -> None:
    """
    Export the lattice of n variables, or of the input distribution with its measures.

    DOT is written unless records are requested.
    """
    from infolattice.export import lattice_document, render_dot
    from infolattice.measures import measure_table

    with input_errors():
        if (n is None) == (config.input_path is None):
            raise LatticeError("give exactly one of --n or --input")
        table = None
        if n is not None:
            lattice = PowerSetLattice(n, max_n=config.max_n)
        else:
            d = load_distribution(config, cardinalities)
            table = measure_table(d, config.log_base, config.max_n)
            lattice = table.lattice
        if config.output_format is OutputFormat.RECORDS:
            document = lattice_document(lattice, table)
        else:
            document = render_dot(lattice, table)
    emit(document, config.out)


def cmd_cancellation(n: int, out: Path | None = None) -> None:
    """Print the signed-term cancellation table for n variables."""
    from infolattice.export import render_cancellation
    from infolattice.transforms import cancellation_table

    with input_errors():
        ct = cancellation_table(n)
    emit(render_cancellation(ct), out)
    if not ct.cancels():
        raise typer.Exit(EXIT_VERIFICATION_FAILED)
