"""
Sum rules on the edge-weighted lattice graph of a lattice function.

Each covering edge tau -> tau ∪ {x} carries the weight F(tau ∪ {x}) - F(tau).
Chain sums therefore telescope, which makes them path-independent for any F.
For F = I the weights are the Δ values, i.e. negated single-variable conditional
interaction informations.
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from infolattice.errors import LatticeError, RoleError
from infolattice.lattice import EMPTY, ChainPath, SubsetMask, is_subset, popcount
from infolattice.transforms import LatticeFunction, Role

logger = logging.getLogger(__name__)

MAX_CHAIN_STEPS = 7


def edge_weight(F: LatticeFunction, tau: SubsetMask, x: int) -> float:
    """
    Weight of the covering edge tau -> tau ∪ {x}.

    Raises:
        LatticeError: If x is already in tau
    """
    F.lattice.check(tau)
    if not 0 <= x < F.lattice.n:
        raise LatticeError(f"variable index {x} out of range")
    if tau >> x & 1:
        raise LatticeError(f"{F.lattice.labels[x]} is already in {F.lattice.label(tau)}")
    return float(F.values[tau | (1 << x)] - F.values[tau])


@dataclass(frozen=True)
class WeightedLatticeGraph:
    """The lattice of F as a directed graph; weights are derived from F on demand."""

    function: LatticeFunction

    def weight(self, tau: SubsetMask, x: int) -> float:
        return edge_weight(self.function, tau, x)

    def edges(self) -> Iterator[tuple[SubsetMask, SubsetMask, int, float]]:
        """(lower, upper, added index, weight) for every covering edge."""
        for lower, upper, x in self.function.lattice.covering_edges():
            yield lower, upper, x, float(self.function.values[upper] - self.function.values[lower])

    def descending_weights(self, node: SubsetMask) -> list[tuple[int, float]]:
        """(removed index, weight) of every edge arriving at node from below."""
        lattice = self.function.lattice
        lattice.check(node)
        return [
            (x, self.weight(node & ~(1 << x), x)) for x in range(lattice.n) if node >> x & 1
        ]


def chain_sum(F: LatticeFunction, chain: ChainPath) -> float:
    """
    Sum of edge weights along a chain, negated when it is traversed downward.

    Equals F(chain.end) - F(chain.start).
    """
    for node in chain.nodes:
        F.lattice.check(node)
    total = sum(edge_weight(F, lower, x) for lower, x in chain.steps())
    return -total if chain.descending else total


def verify_path_independence(
    F: LatticeFunction, a: SubsetMask, b: SubsetMask, max_steps: int = MAX_CHAIN_STEPS
) -> float:
    """
    Spread (max - min) of chain sums over every covering chain from a to b.

    Raises:
        LatticeError: If a is not a subset of b
        ChainLimitError: If |b \\ a| exceeds max_steps
    """
    chains = F.lattice.enumerate_chains(a, b, max_steps=max_steps)
    sums = [chain_sum(F, chain) for chain in chains]
    logger.debug("%d chains %s -> %s", len(chains), F.lattice.label(a), F.lattice.label(b))
    return max(sums) - min(sums)


@dataclass(frozen=True)
class SumRule:
    """One instance of a chain sum rule, with its residual."""

    rule_id: str
    start: SubsetMask
    end: SubsetMask
    chain: tuple[SubsetMask, ...]
    chain_sum: float
    residual: float

    def as_record(self, F: LatticeFunction) -> dict[str, object]:
        lattice = F.lattice
        return {
            "rule": self.rule_id,
            "start": lattice.label(self.start),
            "end": lattice.label(self.end),
            "chain": [lattice.label(node) for node in self.chain],
            "chain_sum": self.chain_sum,
            "residual": self.residual,
        }


def sum_rule_same_endpoint(
    F: LatticeFunction, starts: Sequence[SubsetMask], end: SubsetMask
) -> list[SumRule]:
    """
    Rules sharing a final node: chain_sum(s -> end) + F(s) = F(end) for each start s.

    The canonical chain (variables added in ascending index order) is used for
    each start.

    Raises:
        LatticeError: If some start is not a subset of end
    """
    rules = []
    for start in starts:
        F.lattice.check(start)
        if not is_subset(start, F.lattice.check(end)):
            raise LatticeError(f"{F.lattice.label(start)} is not below {F.lattice.label(end)}")
        chain = next(F.lattice.iter_chains(start, end))
        total = chain_sum(F, chain)
        residual = abs(total + F[start] - F[end])
        rules.append(
            SumRule(
                f"same-end:{F.lattice.label(start)}->{F.lattice.label(end)}",
                start,
                end,
                chain.nodes,
                total,
                residual,
            )
        )
    return rules


def sum_rule_same_endpoints(
    F: LatticeFunction, a: SubsetMask, b: SubsetMask, max_steps: int = MAX_CHAIN_STEPS
) -> list[SumRule]:
    """
    Rules sharing both endpoints: every chain a -> b against the canonical one.

    Raises:
        LatticeError: If a is not a subset of b
        ChainLimitError: If |b \\ a| exceeds max_steps
    """
    chains = F.lattice.enumerate_chains(a, b, max_steps=max_steps)
    reference = chain_sum(F, chains[0])
    rules = []
    for number, chain in enumerate(chains):
        total = chain_sum(F, chain)
        rules.append(
            SumRule(
                f"same-ends:{F.lattice.label(a)}->{F.lattice.label(b)}#{number}",
                a,
                b,
                chain.nodes,
                total,
                abs(total - reference),
            )
        )
    return rules


def multi_conditional(I: LatticeFunction, a: SubsetMask, b: SubsetMask) -> float:
    """
    Accumulated conditional between comparable nodes: I(a) - I(b) for a ⊊ b.

    This is minus the chain sum from a to b, i.e. the sum of the single-variable
    conditional interaction informations met along any chain. The endpoints must
    be at least two steps apart; a single step is an edge weight, not a
    multi-conditional.

    Raises:
        RoleError: If I is not interaction-tagged
        LatticeError: If a is empty, a is not a subset of b, or b adds fewer than two variables
    """
    if I.role is not Role.INTERACTION:
        raise RoleError(f"multi_conditional expects an interaction function, got {I.role}")
    I.lattice.check(a)
    I.lattice.check(b)
    if a == EMPTY:
        raise LatticeError("the conditioned set must be non-empty")
    if not is_subset(a, b) or a == b:
        raise LatticeError(
            f"{I.lattice.label(a)} and {I.lattice.label(b)} are not strictly comparable"
        )
    if popcount(b & ~a) < 2:
        raise LatticeError(
            f"{I.lattice.label(b)} covers {I.lattice.label(a)}; use edge_weight for adjacent nodes"
        )
    logger.debug("multi-conditional over %d steps", popcount(b & ~a))
    return I[a] - I[b]
