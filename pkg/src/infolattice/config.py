"""
Run configuration for infolattice commands.
"""

import math
from enum import StrEnum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, field_validator

from infolattice.lattice import DEFAULT_MAX_N

# exact-arithmetic identities (transforms), relative
EXACT_TOLERANCE = 1e-12
# identities through estimated entropies, absolute bits
DIST_TOLERANCE = 1e-9

DEFAULT_LOG_BASE = 2.0


class InputKind(StrEnum):
    SAMPLES = "samples"
    PMF = "pmf"


class OutputFormat(StrEnum):
    TABLE = "table"
    RECORDS = "records"
    DOT = "dot"


class MeasureName(StrEnum):
    """Lattice function a sum-rule report is built on."""

    ENTROPY = "H"
    INTERACTION = "I"
    MULTI = "M"


def parse_log_base(raw: str | float) -> float:
    """Accept a number or the literal "e"."""
    if isinstance(raw, str) and raw.strip().lower() == "e":
        return math.e
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"log base must be a number or 'e', got {raw!r}") from None


class RunConfig(BaseModel):
    """Settings shared by every command, assembled once from command-line flags."""

    model_config = ConfigDict(frozen=True)

    input_path: Path | None = None
    kind: InputKind = InputKind.PMF
    log_base: float = DEFAULT_LOG_BASE
    tol_exact: float = Field(default=EXACT_TOLERANCE, gt=0)
    tol_dist: float = Field(default=DIST_TOLERANCE, gt=0)
    max_n: int = Field(default=DEFAULT_MAX_N, ge=1)
    output_format: OutputFormat = OutputFormat.TABLE
    out: Path | None = None

    @field_validator("log_base", mode="before")
    @classmethod
    def _log_base(cls, value: str | float) -> float:
        base = parse_log_base(value)
        if not math.isfinite(base) or base <= 0 or base == 1.0:
            raise ValueError(f"log base must be finite, positive and not 1, got {base}")
        return base

    @property
    def unit(self) -> str:
        if self.log_base == 2.0:
            return "bits"
        if self.log_base == math.e:
            return "nats"
        return f"log{self.log_base:g} units"
