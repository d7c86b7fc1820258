"""
Exception hierarchy for infolattice.
"""

from pathlib import Path


class InfoLatticeError(Exception):
    """Base class for every error raised by infolattice."""


class LatticeError(InfoLatticeError, ValueError):
    """Invalid node, incomparable nodes, or an impossible lattice operation."""


class DimensionCapError(LatticeError):
    """The requested lattice exceeds the configured dimension cap."""

    def __init__(self, n: int, max_n: int) -> None:
        super().__init__(f"lattice dimension {n} exceeds the cap of {max_n} variables")
        self.n = n
        self.max_n = max_n


class ChainLimitError(LatticeError):
    """Chain enumeration would exceed the configured step limit."""


class DistributionError(InfoLatticeError, ValueError):
    """Invalid pmf, empty sample set, or conditioning on a null event."""


class RoleError(InfoLatticeError, TypeError):
    """A lattice function carries the wrong role tag for the operation."""


class PreconditionError(InfoLatticeError, ValueError):
    """A measure was requested outside the regime where its identity holds."""


class ConsistencyError(InfoLatticeError):
    """Independent evaluation routes disagree beyond tolerance."""


class InputFormatError(InfoLatticeError):
    """A sample or pmf file could not be parsed."""

    def __init__(self, path: Path, message: str, line: int | None = None) -> None:
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line = line
