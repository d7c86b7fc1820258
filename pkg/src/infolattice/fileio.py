"""
Sample and pmf file readers and writers.

Sample files are comma-separated: a header of variable names, then one record
of non-negative integer states per line. pmf files are JSON documents with a
"variables" list and a "mass" list of (values, p) records.
"""

import csv
import json
import logging
from collections.abc import Mapping, Sequence
from pathlib import Path

from pydantic import BaseModel, Field, ValidationError

from infolattice.distributions import (
    JointDistribution,
    VariableSpec,
    from_mapping,
    from_samples,
)
from infolattice.errors import DistributionError, InputFormatError

logger = logging.getLogger(__name__)


class VariableRecord(BaseModel):
    name: str = Field(min_length=1)
    cardinality: int = Field(ge=1)


class MassRecord(BaseModel):
    values: list[int]
    p: float


class PmfDocument(BaseModel):
    """On-disk shape of a pmf file."""

    variables: list[VariableRecord]
    mass: list[MassRecord]


def read_samples(path: Path) -> tuple[list[str], list[tuple[int, ...]]]:
    """
    Read a comma-separated sample file.

    Args:
        path: File to read

    Returns:
        Tuple of (variable names, records)

    Raises:
        InputFormatError: If the file is empty, has no data rows, or a record is malformed
    """
    try:
        text = path.read_text()
    except OSError as e:
        raise InputFormatError(path, f"cannot read file: {e.strerror}") from None

    reader = csv.reader(text.splitlines())
    header: list[str] | None = None
    rows: list[tuple[int, ...]] = []
    for line_number, fields in enumerate(reader, start=1):
        if not fields or all(not f.strip() for f in fields):
            continue
        if header is None:
            header = [f.strip() for f in fields]
            if len(set(header)) != len(header):
                raise InputFormatError(path, "duplicate variable names in header", line_number)
            continue
        if len(fields) != len(header):
            raise InputFormatError(
                path, f"expected {len(header)} values, found {len(fields)}", line_number
            )
        try:
            record = tuple(int(f.strip()) for f in fields)
        except ValueError:
            raise InputFormatError(
                path, f"non-integer category value in {fields}", line_number
            ) from None
        if any(v < 0 for v in record):
            raise InputFormatError(path, "category values must be non-negative", line_number)
        rows.append(record)

    if header is None:
        raise InputFormatError(path, "file is empty")
    if not rows:
        raise InputFormatError(path, "no data rows")
    logger.debug("read %d records of %d variables from %s", len(rows), len(header), path)
    return header, rows


def infer_specs(
    names: Sequence[str],
    rows: Sequence[Sequence[int]],
    cardinalities: Mapping[str, int] | None = None,
) -> list[VariableSpec]:
    """
    Variable specs for sampled data.

    A variable's cardinality is taken from ``cardinalities`` when given there,
    otherwise it is one more than the largest observed state.
    """
    cardinalities = dict(cardinalities or {})
    unknown = set(cardinalities) - set(names)
    if unknown:
        raise DistributionError(f"cardinality given for unknown variables: {sorted(unknown)}")
    specs = []
    for column, name in enumerate(names):
        observed = max(row[column] for row in rows) + 1
        specs.append(VariableSpec(name, cardinalities.get(name, observed)))
    return specs


def load_samples(
    path: Path, cardinalities: Mapping[str, int] | None = None
) -> JointDistribution:
    """Read a sample file and return its plug-in estimate."""
    names, rows = read_samples(path)
    return from_samples(rows, infer_specs(names, rows, cardinalities))


def load_pmf(path: Path) -> JointDistribution:
    """
    Read and validate a pmf file.

    Raises:
        InputFormatError: If the document is not valid JSON of the expected shape
        DistributionError: If the pmf violates a distribution invariant
    """
    try:
        raw = path.read_text()
    except OSError as e:
        raise InputFormatError(path, f"cannot read file: {e.strerror}") from None
    if not raw.strip():
        raise InputFormatError(path, "file is empty")
    try:
        document = PmfDocument.model_validate_json(raw)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        raise InputFormatError(path, f"{where}: {first['msg']}") from None

    variables = [VariableSpec(v.name, v.cardinality) for v in document.variables]
    pmf: dict[tuple[int, ...], float] = {}
    for record in document.mass:
        key = tuple(record.values)
        if key in pmf:
            raise InputFormatError(path, f"tuple {list(key)} is listed twice")
        pmf[key] = record.p
    return from_mapping(variables, pmf)


def pmf_document(d: JointDistribution) -> PmfDocument:
    return PmfDocument(
        variables=[VariableRecord(name=v.name, cardinality=v.cardinality) for v in d.variables],
        mass=[MassRecord(values=list(state), p=p) for state, p in sorted(d.pmf.items())],
    )


def dump_pmf(d: JointDistribution) -> str:
    """Serialize a distribution, tuples in ascending order."""
    return json.dumps(pmf_document(d).model_dump(), indent=2) + "\n"


def save_pmf(d: JointDistribution, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_pmf(d))
