"""
Discrete joint distributions over named categorical variables.

The pmf is stored sparsely (only tuples with non-zero mass); marginals and
entropies group the support rows with numpy instead of materializing the full
state space.
"""

import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import numpy.typing as npt

from infolattice.errors import DistributionError
from infolattice.lattice import DEFAULT_MAX_N, PowerSetLattice, SubsetMask, members
from infolattice.transforms import LatticeFunction, Role

logger = logging.getLogger(__name__)

MASS_TOLERANCE = 1e-9
# int64 headroom for mixed-radix state codes
_MAX_SPAN = 1 << 62
# bincount directly when the code span is at most this many cells per support row
_DENSE_SPAN_FACTOR = 4

StateTuple = tuple[int, ...]


@dataclass(frozen=True)
class VariableSpec:
    """A categorical variable with states 0..cardinality-1."""

    name: str
    cardinality: int


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate(); ``constraint`` names the first violated invariant."""

    ok: bool
    constraint: str | None = None
    message: str | None = None

    def raise_for_violation(self) -> None:
        if not self.ok:
            raise DistributionError(f"{self.constraint}: {self.message}")


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """A discrete joint pmf, keyed by complete state tuples."""

    variables: tuple[VariableSpec, ...]
    pmf: Mapping[StateTuple, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(
            self,
            "pmf",
            {tuple(int(x) for x in t): float(p) for t, p in self.pmf.items() if p != 0.0},
        )

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return tuple(v.cardinality for v in self.variables)

    @property
    def total_mass(self) -> float:
        return math.fsum(self.pmf.values())

    @property
    def support_size(self) -> int:
        return len(self.pmf)

    def probability(self, state: Sequence[int]) -> float:
        return self.pmf.get(tuple(state), 0.0)

    @cached_property
    def _support(self) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.float64]]:
        if not self.pmf:
            return np.zeros((0, self.n), dtype=np.int64), np.zeros(0)
        states = np.array(list(self.pmf.keys()), dtype=np.int64).reshape(len(self.pmf), self.n)
        probs = np.array(list(self.pmf.values()), dtype=np.float64)
        return states, probs

    def lattice(self, max_n: int = DEFAULT_MAX_N) -> PowerSetLattice:
        return PowerSetLattice(self.n, self.names, max_n=max_n)


def validate(d: JointDistribution) -> ValidationReport:
    """
    Check the distribution invariants without raising.

    Args:
        d: Distribution to check

    Returns:
        A report that is ok, or names the first violated constraint
    """
    seen: set[str] = set()
    for spec in d.variables:
        if spec.cardinality < 1:
            return ValidationReport(
                False, "cardinality", f"variable {spec.name!r} has cardinality {spec.cardinality}"
            )
        if spec.name in seen:
            return ValidationReport(False, "unique-names", f"variable {spec.name!r} appears twice")
        seen.add(spec.name)

    for state, p in d.pmf.items():
        if len(state) != d.n:
            return ValidationReport(
                False, "arity", f"tuple {state} has {len(state)} values for {d.n} variables"
            )
        for value, spec in zip(state, d.variables, strict=True):
            if not 0 <= value < spec.cardinality:
                return ValidationReport(
                    False,
                    "range",
                    f"value {value} of {spec.name!r} is outside 0..{spec.cardinality - 1}",
                )
        if not math.isfinite(p):
            return ValidationReport(False, "finite", f"probability of {state} is {p}")
        if p < 0:
            return ValidationReport(False, "nonnegativity", f"probability of {state} is {p}")

    total = d.total_mass
    if abs(total - 1.0) > MASS_TOLERANCE:
        return ValidationReport(False, "mass", f"total mass is {total!r}, expected 1")
    return ValidationReport(True)


def from_mapping(
    variables: Sequence[VariableSpec], pmf: Mapping[StateTuple, float]
) -> JointDistribution:
    """
    Build a distribution and insist that it is valid.

    Raises:
        DistributionError: Naming the first violated constraint
    """
    d = JointDistribution(tuple(variables), pmf)
    validate(d).raise_for_violation()
    return d


def from_samples(
    rows: Iterable[Sequence[int]], specs: Sequence[VariableSpec]
) -> JointDistribution:
    """
    Plug-in (maximum-likelihood) estimate: pmf(t) = count(t) / N.

    Args:
        rows: Complete categorical records
        specs: Variables, in column order

    Returns:
        The empirical distribution; unseen tuples get no mass

    Raises:
        DistributionError: If there are no rows, or a value falls outside its cardinality
    """
    data = [tuple(row) for row in rows]
    if not data:
        raise DistributionError("cannot estimate a distribution from zero samples")
    n = len(specs)
    for line, row in enumerate(data, start=1):
        if len(row) != n:
            raise DistributionError(f"sample {line} has {len(row)} values for {n} variables")
        for value, spec in zip(row, specs, strict=True):
            if not 0 <= value < spec.cardinality:
                raise DistributionError(
                    f"sample {line}: value {value} of {spec.name!r} is outside "
                    f"0..{spec.cardinality - 1}"
                )

    matrix = np.array(data, dtype=np.int64).reshape(len(data), n)
    states, counts = np.unique(matrix, axis=0, return_counts=True)
    total = len(data)
    pmf = {tuple(int(x) for x in s): int(c) / total for s, c in zip(states, counts, strict=True)}
    logger.debug("estimated pmf from %d samples, support %d", total, len(pmf))
    return from_mapping(specs, pmf)


def _radices(d: JointDistribution) -> npt.NDArray[np.int64]:
    """Per-variable digit base: the cardinality, widened to cover any stray state."""
    states, _ = d._support
    radices = np.array(d.cardinalities, dtype=np.int64).reshape(d.n)
    if states.shape[0]:
        radices = np.maximum(radices, states.max(axis=0) + 1)
    return radices


def _append_digit(
    codes: npt.NDArray[np.int64], span: int, column: npt.NDArray[np.int64], radix: int
) -> tuple[npt.NDArray[np.int64], int]:
    """Extend each code by one low digit, renumbering first if int64 would overflow."""
    if span > _MAX_SPAN // radix:
        distinct, inverse = np.unique(codes, return_inverse=True)
        codes = inverse.reshape(-1).astype(np.int64)
        span = int(distinct.shape[0])
    return codes * radix + column, span * radix


def _encode(
    states: npt.NDArray[np.int64], radices: Sequence[int]
) -> tuple[npt.NDArray[np.int64], int]:
    """
    One integer per row, ordered like the rows' lexicographic order.

    Returns:
        Tuple of (codes, span) with every code in 0..span-1
    """
    codes = np.zeros(states.shape[0], dtype=np.int64)
    span = 1
    for column, radix in zip(states.T, radices, strict=True):
        codes, span = _append_digit(codes, span, column, int(radix))
    return codes, span


def _code_masses(
    codes: npt.NDArray[np.int64], span: int, probs: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    """Mass of every distinct code; zero cells may be included."""
    if span <= max(_DENSE_SPAN_FACTOR * codes.shape[0], 1 << 16):
        return np.bincount(codes, weights=probs, minlength=span)
    _, inverse = np.unique(codes, return_inverse=True)
    return np.bincount(inverse.reshape(-1), weights=probs)


def _group_masses(
    d: JointDistribution, indices: Sequence[int]
) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.float64]]:
    """Distinct projected states on ``indices``, in lexicographic order, and the mass of each."""
    states, probs = d._support
    projected = states[:, list(indices)]
    if projected.shape[0] == 0:
        return projected, probs
    codes, _ = _encode(projected, _radices(d)[list(indices)].tolist())
    distinct, first, inverse = np.unique(codes, return_index=True, return_inverse=True)
    masses = np.bincount(inverse.reshape(-1), weights=probs, minlength=distinct.shape[0])
    return projected[first], masses


def marginal(d: JointDistribution, tau: SubsetMask) -> JointDistribution:
    """
    Sum out every variable not in tau.

    Raises:
        DistributionError: If tau is empty or names a variable outside d
    """
    if tau == 0:
        raise DistributionError("the marginal over no variables is not a distribution")
    if tau >> d.n:
        raise DistributionError(f"mask {tau:#b} names variables beyond the {d.n} of this pmf")
    kept = members(tau)
    unique, masses = _group_masses(d, kept)
    pmf = {tuple(int(x) for x in s): float(m) for s, m in zip(unique, masses, strict=True)}
    return JointDistribution(tuple(d.variables[i] for i in kept), pmf)


def slice_condition(d: JointDistribution, assignments: Mapping[int, int]) -> JointDistribution:
    """
    Condition on fixed values of some variables and renormalize.

    Args:
        d: Source distribution
        assignments: Variable index -> assigned state

    Returns:
        Distribution over the unassigned variables, in their original order

    Raises:
        DistributionError: If the conditioning event has zero probability
    """
    for index, value in assignments.items():
        if not 0 <= index < d.n:
            raise DistributionError(f"variable index {index} out of range for {d.n} variables")
        if not 0 <= value < d.variables[index].cardinality:
            raise DistributionError(
                f"value {value} is not a state of {d.variables[index].name!r}"
            )
    states, probs = d._support
    keep = np.ones(states.shape[0], dtype=bool)
    for index, value in assignments.items():
        keep &= states[:, index] == value
    mass = float(probs[keep].sum())
    if mass <= 0.0:
        described = ", ".join(f"{d.variables[i].name}={v}" for i, v in sorted(assignments.items()))
        raise DistributionError(f"cannot condition on the zero-probability event {described}")

    free = [i for i in range(d.n) if i not in assignments]
    pmf: dict[StateTuple, float] = {}
    for row, p in zip(states[keep], probs[keep], strict=True):
        key = tuple(int(row[i]) for i in free)
        pmf[key] = pmf.get(key, 0.0) + float(p) / mass
    return JointDistribution(tuple(d.variables[i] for i in free), pmf)


def permute(d: JointDistribution, order: Sequence[int]) -> JointDistribution:
    """Relabel variables so that variable i moves to position order[i]."""
    if sorted(order) != list(range(d.n)):
        raise DistributionError(f"{list(order)} is not a permutation of 0..{d.n - 1}")
    variables: list[VariableSpec | None] = [None] * d.n
    for i, target in enumerate(order):
        variables[target] = d.variables[i]
    pmf = {}
    for state, p in d.pmf.items():
        moved = [0] * d.n
        for i, target in enumerate(order):
            moved[target] = state[i]
        pmf[tuple(moved)] = p
    return JointDistribution(tuple(v for v in variables if v is not None), pmf)


def check_log_base(base: float) -> float:
    """
    Return base unchanged if it can serve as a logarithm base.

    Raises:
        DistributionError: If base is not finite, not positive, or 1
    """
    if not math.isfinite(base) or base <= 0 or base == 1.0:
        raise DistributionError(f"log base must be finite, positive and not 1, got {base}")
    return base


def _entropy_of_masses(masses: npt.NDArray[np.float64], base: float) -> float:
    p = masses[masses > 0]
    if p.size == 0:
        return 0.0
    logs = np.log2(p) if base == 2.0 else np.log(p) / math.log(base)
    h = -float(np.sum(p * logs))
    # 0 log 0 = 0; clamp the -0.0 / rounding noise of point masses
    return max(h, 0.0)


def entropy(d: JointDistribution, base: float = 2.0) -> float:
    """Shannon entropy -Σ p log p over the support, in bits unless base says otherwise."""
    _, probs = d._support
    return _entropy_of_masses(probs, check_log_base(base))


def subset_entropy(d: JointDistribution, tau: SubsetMask, base: float = 2.0) -> float:
    """Entropy of the marginal on tau; 0 for the empty set."""
    check_log_base(base)
    if tau == 0:
        return 0.0
    states, probs = d._support
    indices = list(members(tau))
    codes, span = _encode(states[:, indices], _radices(d)[indices].tolist())
    return _entropy_of_masses(_code_masses(codes, span, probs), base)


def entropy_lattice(
    d: JointDistribution, base: float = 2.0, max_n: int = DEFAULT_MAX_N
) -> LatticeFunction:
    """
    Joint entropy of every variable subset.

    Subsets are visited depth first, each one extending its parent's state
    codes by a single digit, so every marginal costs one pass over the support.

    Args:
        d: A valid distribution
        base: Logarithm base
        max_n: Dimension cap

    Returns:
        Entropy-tagged function with H(∅) = 0

    Raises:
        DistributionError: If d is invalid or base is not a usable log base
        DimensionCapError: If d has more than max_n variables
    """
    validate(d).raise_for_violation()
    check_log_base(base)
    lattice = d.lattice(max_n)
    states, probs = d._support
    radices = _radices(d).tolist()
    columns = [np.ascontiguousarray(states[:, i]) for i in range(lattice.n)]
    values = np.zeros(lattice.size)

    def visit(tau: SubsetMask, codes: npt.NDArray[np.int64], span: int, first: int) -> None:
        for i in range(first, lattice.n):
            child_codes, child_span = _append_digit(codes, span, columns[i], radices[i])
            child = tau | (1 << i)
            values[child] = _entropy_of_masses(_code_masses(child_codes, child_span, probs), base)
            visit(child, child_codes, child_span, i + 1)

    visit(0, np.zeros(states.shape[0], dtype=np.int64), 1, 0)
    logger.debug("entropy lattice over %d variables", lattice.n)
    return LatticeFunction(lattice, values, Role.ENTROPY)
