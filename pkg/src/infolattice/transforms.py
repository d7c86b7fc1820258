"""
Subset-sum transforms on lattice functions.

Every transform exists twice: a fast in-place O(n * 2^n) pass over one
dimension at a time (the default), and a definition-level O(3^n) double loop
kept as an oracle. Transforms always return a fresh LatticeFunction.
"""

import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from enum import StrEnum
from functools import lru_cache

import numpy as np
import numpy.typing as npt

from infolattice.errors import LatticeError
from infolattice.lattice import PowerSetLattice, SubsetMask, is_subset, submasks

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

MAX_CANCELLATION_N = 6


class Role(StrEnum):
    """What a lattice function holds."""

    ENTROPY = "entropy"
    INTERACTION = "interaction"
    MULTI = "multi"
    DELTA = "delta"
    GENERIC = "generic"


class Convention(StrEnum):
    """Sign attached to each subset term of a signed transform."""

    PLAIN = "plain"  # (-1)^|tau|
    PLUS_ONE = "plus-one"  # (-1)^(|tau|+1)


@dataclass(frozen=True, eq=False)
class LatticeFunction:
    """A finite real value on every node of a lattice, stored densely by mask."""

    lattice: PowerSetLattice
    values: FloatArray
    role: Role = Role.GENERIC

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.shape != (self.lattice.size,):
            raise LatticeError(
                f"expected {self.lattice.size} values for a {self.lattice.n}-variable lattice, "
                f"got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise LatticeError("lattice function values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __getitem__(self, mask: SubsetMask) -> float:
        return float(self.values[self.lattice.check(mask)])

    def with_role(self, role: Role) -> "LatticeFunction":
        return LatticeFunction(self.lattice, self.values, role)

    @classmethod
    def from_mapping(
        cls,
        lattice: PowerSetLattice,
        mapping: Mapping[SubsetMask, float],
        role: Role = Role.GENERIC,
    ) -> "LatticeFunction":
        """Build from a sparse mapping; nodes not mentioned get 0."""
        values = np.zeros(lattice.size)
        for mask, value in mapping.items():
            values[lattice.check(mask)] = value
        return cls(lattice, values, role)

    @classmethod
    def from_callable(
        cls,
        lattice: PowerSetLattice,
        fn: Callable[[SubsetMask], float],
        role: Role = Role.GENERIC,
    ) -> "LatticeFunction":
        return cls(lattice, np.array([fn(mask) for mask in lattice.nodes()]), role)


@lru_cache(maxsize=32)
def cardinalities(n: int) -> npt.NDArray[np.int64]:
    """|tau| for every mask of an n-variable lattice."""
    pc = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        pc[1 << i : 1 << (i + 1)] = pc[: 1 << i] + 1
    pc.flags.writeable = False
    return pc


def sign_vector(n: int, convention: Convention) -> FloatArray:
    """The diagonal sign map of a signed transform, as a dense vector."""
    signs = np.where(cardinalities(n) % 2 == 0, 1.0, -1.0)
    return signs if convention is Convention.PLAIN else -signs


def relative_residual(expected: FloatArray, actual: FloatArray) -> float:
    """max|expected - actual| scaled by max(1, max|expected|)."""
    if expected.size == 0:
        return 0.0
    scale = max(1.0, float(np.max(np.abs(expected))))
    return float(np.max(np.abs(expected - actual))) / scale


def _subset_sum_inplace(values: FloatArray, n: int, sign: float) -> None:
    # axis 1 of the view is bit i of the mask
    for i in range(n):
        view = values.reshape(-1, 2, 1 << i)
        view[:, 1, :] += sign * view[:, 0, :]


def zeta(g: LatticeFunction, role: Role = Role.GENERIC) -> LatticeFunction:
    """
    Sum-over-subsets transform: f(nu) = Σ_{tau ⊆ nu} g(tau), empty set included.

    Args:
        g: Input function
        role: Role tag of the result

    Returns:
        The transformed function
    """
    out = np.array(g.values, dtype=np.float64)
    _subset_sum_inplace(out, g.lattice.n, 1.0)
    return LatticeFunction(g.lattice, out, role)


def mobius_invert(f: LatticeFunction, role: Role = Role.GENERIC) -> LatticeFunction:
    """Inverse of zeta: g(nu) = Σ_{tau ⊆ nu} (-1)^(|tau|+|nu|) f(tau)."""
    out = np.array(f.values, dtype=np.float64)
    _subset_sum_inplace(out, f.lattice.n, -1.0)
    return LatticeFunction(f.lattice, out, role)


def signed_transform(
    h: LatticeFunction,
    convention: Convention = Convention.PLAIN,
    role: Role = Role.GENERIC,
) -> LatticeFunction:
    """
    Signed subset sum f(nu) = Σ_{tau ⊆ nu} s(tau) h(tau).

    s(tau) is (-1)^|tau| under the plain convention and (-1)^(|tau|+1) under the
    plus-one convention. Either way the transform is its own inverse.

    Args:
        h: Input function
        convention: Sign convention
        role: Role tag of the result

    Returns:
        The transformed function
    """
    out = sign_vector(h.lattice.n, convention) * h.values
    _subset_sum_inplace(out, h.lattice.n, 1.0)
    return LatticeFunction(h.lattice, out, role)


def zeta_naive(g: LatticeFunction) -> LatticeFunction:
    """Definition-level zeta transform."""
    return LatticeFunction.from_callable(
        g.lattice, lambda nu: sum(g.values[tau] for tau in submasks(nu)), g.role
    )


def mobius_invert_naive(f: LatticeFunction) -> LatticeFunction:
    """Definition-level Möbius inversion."""
    pc = cardinalities(f.lattice.n)

    def value(nu: SubsetMask) -> float:
        return sum(
            (1.0 if (pc[tau] + pc[nu]) % 2 == 0 else -1.0) * f.values[tau]
            for tau in submasks(nu)
        )

    return LatticeFunction.from_callable(f.lattice, value, f.role)


def signed_transform_naive(
    h: LatticeFunction, convention: Convention = Convention.PLAIN
) -> LatticeFunction:
    """Definition-level signed transform."""
    signs = sign_vector(h.lattice.n, convention)
    return LatticeFunction.from_callable(
        h.lattice, lambda nu: sum(signs[tau] * h.values[tau] for tau in submasks(nu)), h.role
    )


def signed_double_sum(h: LatticeFunction, nu: SubsetMask) -> float:
    """
    Σ_{sigma ⊆ tau ⊆ nu} (-1)^(|tau|+|sigma|) h(sigma), evaluated by the nested loop.

    All terms cancel except h(nu).
    """
    pc = cardinalities(h.lattice.n)
    total = 0.0
    for tau in submasks(h.lattice.check(nu)):
        for sigma in submasks(tau):
            total += (1.0 if (pc[tau] + pc[sigma]) % 2 == 0 else -1.0) * h.values[sigma]
    return total


@dataclass(frozen=True)
class CancellationTable:
    """
    Signed term multiplicities of the nested double sum over sigma ⊆ tau ⊆ full.

    ``entries[sigma, tau]`` is (-1)^(|tau|+|sigma|) when sigma ⊆ tau and 0 otherwise.
    Rows and columns are both indexed by mask in ascending order.
    """

    lattice: PowerSetLattice
    entries: npt.NDArray[np.int64]

    @property
    def row_sums(self) -> npt.NDArray[np.int64]:
        return np.asarray(self.entries.sum(axis=1), dtype=np.int64)

    def expected_row_sums(self) -> npt.NDArray[np.int64]:
        expected = np.zeros(self.lattice.size, dtype=np.int64)
        expected[self.lattice.full] = 1
        return expected

    def cancels(self) -> bool:
        """True when every row but the full-set row sums to zero and the full-set row to one."""
        return bool(np.array_equal(self.row_sums, self.expected_row_sums()))


def cancellation_table(n: int) -> CancellationTable:
    """
    Build the cancellation table for n variables.

    Raises:
        LatticeError: If n is outside 1..6
    """
    if not 1 <= n <= MAX_CANCELLATION_N:
        raise LatticeError(
            f"cancellation tables are built for 1 ≤ n ≤ {MAX_CANCELLATION_N}, got {n}"
        )
    lattice = PowerSetLattice(n)
    pc = cardinalities(n)
    entries = np.zeros((lattice.size, lattice.size), dtype=np.int64)
    for sigma in lattice.nodes():
        for tau in lattice.nodes():
            if is_subset(sigma, tau):
                entries[sigma, tau] = 1 if (pc[tau] + pc[sigma]) % 2 == 0 else -1
    logger.debug("built %dx%d cancellation table", lattice.size, lattice.size)
    return CancellationTable(lattice, entries)
