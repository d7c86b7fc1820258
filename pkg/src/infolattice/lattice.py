"""
Power-set lattices over a variable set.

A node is a subset of variable indices encoded as an int: bit i is set iff
variable i belongs to the subset. All lattice-wide tables elsewhere in the
package are dense arrays indexed by this encoding, and every enumeration is in
ascending encoding order.
"""

import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from itertools import permutations
from math import factorial
from typing import TypeAlias

from infolattice.errors import ChainLimitError, DimensionCapError, LatticeError

logger = logging.getLogger(__name__)

SubsetMask: TypeAlias = int

DEFAULT_MAX_N = 20
EMPTY: SubsetMask = 0


def popcount(mask: SubsetMask) -> int:
    """Cardinality of the subset."""
    return mask.bit_count()


def members(mask: SubsetMask) -> tuple[int, ...]:
    """Variable indices in the subset, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_of(indices: Iterable[int]) -> SubsetMask:
    """Encode a collection of variable indices."""
    mask = 0
    for i in indices:
        if i < 0:
            raise LatticeError(f"negative variable index {i}")
        mask |= 1 << i
    return mask


def is_subset(a: SubsetMask, b: SubsetMask) -> bool:
    return a & ~b == 0


def submasks(nu: SubsetMask) -> list[SubsetMask]:
    """
    All subsets of nu, each once, ascending by encoding.

    Args:
        nu: Node whose principal ideal is enumerated

    Returns:
        The 2^|nu| subsets, starting with the empty set
    """
    if nu < 0:
        raise LatticeError(f"invalid mask {nu}")
    out = []
    s = nu
    while True:
        out.append(s)
        if s == 0:
            break
        s = (s - 1) & nu
    out.reverse()
    return out


def sign_plus(tau: SubsetMask) -> int:
    """(-1)^(|tau|+1): +1 for odd cardinality, -1 for even (including the empty set)."""
    return 1 if popcount(tau) % 2 == 1 else -1


def sign_plain(tau: SubsetMask) -> int:
    """(-1)^|tau|."""
    return -1 if popcount(tau) % 2 == 1 else 1


def mobius(tau: SubsetMask, nu: SubsetMask) -> int:
    """
    Möbius function of the inclusion order in its factored form.

    Args:
        tau: Lower node
        nu: Upper node

    Returns:
        (-1)^(|tau|+|nu|), which equals sign_plus(tau) * sign_plus(nu)

    Raises:
        LatticeError: If tau is not a subset of nu
    """
    if not is_subset(tau, nu):
        raise LatticeError(f"mobius({tau:#b}, {nu:#b}) requires tau ⊆ nu")
    return 1 if (popcount(tau) + popcount(nu)) % 2 == 0 else -1


def permute_mask(mask: SubsetMask, order: Sequence[int]) -> SubsetMask:
    """Relabel a mask: variable i moves to position order[i]."""
    return mask_of(order[i] for i in members(mask))


@dataclass(frozen=True)
class ChainPath:
    """
    A chain of covering steps between two comparable nodes.

    ``nodes`` is always stored bottom-up, each node adding exactly one index to
    its predecessor. ``descending`` records that the chain is traversed from
    the top node down to the bottom node.
    """

    nodes: tuple[SubsetMask, ...]
    descending: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if not self.nodes:
            raise LatticeError("a chain needs at least one node")
        for lower, upper in zip(self.nodes, self.nodes[1:], strict=False):
            if not is_subset(lower, upper) or popcount(upper & ~lower) != 1:
                raise LatticeError(
                    f"{upper:#b} does not cover {lower:#b}; chains move one variable per step"
                )

    @property
    def bottom(self) -> SubsetMask:
        return self.nodes[0]

    @property
    def top(self) -> SubsetMask:
        return self.nodes[-1]

    @property
    def start(self) -> SubsetMask:
        return self.top if self.descending else self.bottom

    @property
    def end(self) -> SubsetMask:
        return self.bottom if self.descending else self.top

    def __len__(self) -> int:
        """Number of steps."""
        return len(self.nodes) - 1

    def steps(self) -> list[tuple[SubsetMask, int]]:
        """(lower node, added index) for every covering step, bottom-up."""
        return [
            (lower, (upper & ~lower).bit_length() - 1)
            for lower, upper in zip(self.nodes, self.nodes[1:], strict=False)
        ]

    def added_indices(self) -> tuple[int, ...]:
        return tuple(index for _, index in self.steps())

    def reversed(self) -> "ChainPath":
        return ChainPath(self.nodes, descending=not self.descending)

    @classmethod
    def from_order(cls, start: SubsetMask, order: Iterable[int]) -> "ChainPath":
        """Build the ascending chain that adds ``order`` one index at a time to ``start``."""
        nodes = [start]
        for index in order:
            nodes.append(nodes[-1] | (1 << index))
        return cls(tuple(nodes))


@dataclass(frozen=True)
class PowerSetLattice:
    """The Boolean lattice of all subsets of n labelled variables."""

    n: int
    labels: tuple[str, ...] = ()
    max_n: int = field(default=DEFAULT_MAX_N, compare=False)

    def __post_init__(self) -> None:
        if self.max_n < 1:
            raise LatticeError(f"dimension cap must be at least 1, got {self.max_n}")
        if self.n < 0:
            raise LatticeError(f"dimension must be non-negative, got {self.n}")
        if self.n > self.max_n:
            raise DimensionCapError(self.n, self.max_n)
        labels = tuple(self.labels) or tuple(f"X{i + 1}" for i in range(self.n))
        if len(labels) != self.n:
            raise LatticeError(f"expected {self.n} labels, got {len(labels)}")
        if len(set(labels)) != len(labels):
            raise LatticeError(f"variable labels must be unique: {labels}")
        object.__setattr__(self, "labels", labels)

    @property
    def full(self) -> SubsetMask:
        return (1 << self.n) - 1

    @property
    def size(self) -> int:
        return 1 << self.n

    def nodes(self) -> range:
        return range(self.size)

    def check(self, mask: SubsetMask) -> SubsetMask:
        """Return mask unchanged, or raise if it names a variable outside the lattice."""
        if mask < 0 or mask > self.full:
            raise LatticeError(f"mask {mask:#b} is not a node of the {self.n}-variable lattice")
        return mask

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LatticeError(f"unknown variable {label!r}") from None

    def mask(self, labels: Iterable[str]) -> SubsetMask:
        """Encode variable names."""
        return mask_of(self.index(label) for label in labels)

    def label(self, mask: SubsetMask) -> str:
        """Human label such as "X1,X3", or "∅" for the bottom element."""
        self.check(mask)
        if mask == EMPTY:
            return "∅"
        return ",".join(self.labels[i] for i in members(mask))

    def covering_edges(self) -> list[tuple[SubsetMask, SubsetMask, int]]:
        """
        Every covering pair (tau, tau ∪ {x}, x) exactly once.

        Ordered by lower node, then by added index. There are n * 2^(n-1) of them.
        """
        edges = []
        for tau in self.nodes():
            for x in range(self.n):
                bit = 1 << x
                if not tau & bit:
                    edges.append((tau, tau | bit, x))
        return edges

    def up_set(self, node: SubsetMask) -> frozenset[SubsetMask]:
        """Principal filter {sigma : node ⊆ sigma}."""
        self.check(node)
        return frozenset(node | s for s in submasks(self.full & ~node))

    def down_set(self, node: SubsetMask) -> frozenset[SubsetMask]:
        """Principal ideal {sigma : sigma ⊆ node}."""
        self.check(node)
        return frozenset(submasks(node))

    def iter_chains(self, a: SubsetMask, b: SubsetMask) -> Iterator[ChainPath]:
        """Lazily yield every covering chain from a up to b in lexicographic step order."""
        self.check(a)
        self.check(b)
        if not is_subset(a, b):
            raise LatticeError(f"{self.label(a)} and {self.label(b)} are not comparable as a ⊆ b")
        for order in permutations(members(b & ~a)):
            yield ChainPath.from_order(a, order)

    def enumerate_chains(
        self, a: SubsetMask, b: SubsetMask, max_steps: int | None = None
    ) -> list[ChainPath]:
        """
        All maximal covering chains from a to b.

        Args:
            a: Bottom endpoint
            b: Top endpoint, a superset of a
            max_steps: Optional cap on |b \\ a|

        Returns:
            |b \\ a|! chains, ordered lexicographically by the sequence of added indices

        Raises:
            LatticeError: If a is not a subset of b
            ChainLimitError: If |b \\ a| exceeds max_steps
        """
        steps = popcount(b & ~a)
        if max_steps is not None and steps > max_steps:
            raise ChainLimitError(
                f"{factorial(steps)} chains between {self.label(a)} and {self.label(b)} "
                f"exceed the {max_steps}-step enumeration limit"
            )
        return list(self.iter_chains(a, b))

    def condition_projection(self, condition: SubsetMask) -> "ConditionProjection":
        """
        Collapse the filter above ``condition`` onto a lower-dimensional power set.

        Raises:
            LatticeError: If condition is empty or not a node
        """
        self.check(condition)
        if condition == EMPTY:
            raise LatticeError("conditioning on the empty set is the identity, not a projection")
        remaining = tuple(i for i in range(self.n) if not condition >> i & 1)
        target = PowerSetLattice(
            len(remaining), tuple(self.labels[i] for i in remaining), max_n=self.max_n
        )
        logger.debug("projecting %s onto %d dimensions", self.label(condition), target.n)
        return ConditionProjection(self, condition, target, remaining)


@dataclass(frozen=True)
class ConditionProjection:
    """
    Order isomorphism sigma ↦ sigma \\ condition from the principal filter above
    ``condition`` onto the power set of the remaining variables, re-indexed densely.
    """

    source: PowerSetLattice
    condition: SubsetMask
    target: PowerSetLattice
    remaining: tuple[int, ...]

    def forward(self, sigma: SubsetMask) -> SubsetMask:
        self.source.check(sigma)
        if not is_subset(self.condition, sigma):
            raise LatticeError(
                f"{self.source.label(sigma)} is outside the filter above "
                f"{self.source.label(self.condition)}"
            )
        packed = 0
        for j, i in enumerate(self.remaining):
            if sigma >> i & 1:
                packed |= 1 << j
        return packed

    def inverse(self, rho: SubsetMask) -> SubsetMask:
        self.target.check(rho)
        return self.condition | mask_of(self.remaining[j] for j in members(rho))

    def domain(self) -> list[SubsetMask]:
        """Filter nodes in ascending encoding order."""
        return sorted(self.source.up_set(self.condition))

    def pairs(self) -> list[tuple[SubsetMask, SubsetMask]]:
        """(filter node, projected node) for the whole filter, ascending by target."""
        return [(self.inverse(rho), rho) for rho in self.target.nodes()]
