"""
Information measures on the lattice: joint entropy H, interaction information I,
multi-information M and differential interaction information Δ.

Sign convention: I(nu) = Σ_{tau ⊆ nu} (-1)^(|tau|+1) H(tau), with
H(∅) = I(∅) = M(∅) = 0. Wherever an identity gives a second way to reach a
value, the module exposes it so the routes can be compared.
"""

import logging
from dataclasses import dataclass

import numpy as np

from infolattice.config import DEFAULT_LOG_BASE, DIST_TOLERANCE, EXACT_TOLERANCE
from infolattice.distributions import (
    JointDistribution,
    entropy_lattice,
    marginal,
    slice_condition,
    subset_entropy,
)
from infolattice.errors import ConsistencyError, LatticeError, PreconditionError, RoleError
from infolattice.lattice import (
    DEFAULT_MAX_N,
    EMPTY,
    ChainPath,
    PowerSetLattice,
    SubsetMask,
    mask_of,
    members,
    popcount,
    sign_plain,
    sign_plus,
    submasks,
)
from infolattice.transforms import Convention, LatticeFunction, Role, signed_transform, zeta

logger = logging.getLogger(__name__)


def _require_role(fn: LatticeFunction, role: Role, operation: str) -> None:
    if fn.role is not role:
        raise RoleError(f"{operation} expects a {role} function, got {fn.role}")


@dataclass(frozen=True)
class MeasureTable:
    """H, I and M over one lattice, plus the distribution they came from (if any)."""

    entropy: LatticeFunction
    interaction: LatticeFunction
    multi: LatticeFunction
    distribution: JointDistribution | None = None
    log_base: float = DEFAULT_LOG_BASE

    def __post_init__(self) -> None:
        lattice = self.entropy.lattice
        if self.interaction.lattice != lattice or self.multi.lattice != lattice:
            raise LatticeError("H, I and M of a measure table must share one lattice")
        _require_role(self.entropy, Role.ENTROPY, "MeasureTable")
        _require_role(self.interaction, Role.INTERACTION, "MeasureTable")
        _require_role(self.multi, Role.MULTI, "MeasureTable")

    @property
    def lattice(self) -> PowerSetLattice:
        return self.entropy.lattice

    @classmethod
    def from_entropy(
        cls,
        H: LatticeFunction,
        distribution: JointDistribution | None = None,
        log_base: float = DEFAULT_LOG_BASE,
    ) -> "MeasureTable":
        return cls(H, interaction_lattice(H), multi_lattice(H), distribution, log_base)


def measure_table(
    d: JointDistribution, log_base: float = DEFAULT_LOG_BASE, max_n: int = DEFAULT_MAX_N
) -> MeasureTable:
    """Compute H, I and M for every subset of d's variables."""
    H = entropy_lattice(d, log_base, max_n)
    logger.info("measure table for %d variables (%d nodes)", H.lattice.n, H.lattice.size)
    return MeasureTable.from_entropy(H, d, log_base)


def interaction_lattice(H: LatticeFunction) -> LatticeFunction:
    """
    Interaction information of every subset from the entropy lattice.

    Raises:
        RoleError: If H is not entropy-tagged
        PreconditionError: If H(∅) is not 0
    """
    _require_role(H, Role.ENTROPY, "interaction_lattice")
    if abs(H.values[EMPTY]) > EXACT_TOLERANCE:
        raise PreconditionError(f"H(∅) must be 0, got {H.values[EMPTY]}")
    return signed_transform(H, Convention.PLUS_ONE, Role.INTERACTION)


def entropy_from_interaction(I: LatticeFunction) -> LatticeFunction:
    """Recover joint entropies: H(nu) = Σ_{tau ⊆ nu} (-1)^(|tau|+1) I(tau)."""
    _require_role(I, Role.INTERACTION, "entropy_from_interaction")
    return signed_transform(I, Convention.PLUS_ONE, Role.ENTROPY)


def multi_lattice(H: LatticeFunction) -> LatticeFunction:
    """M(nu) = Σ_{i ∈ nu} H({i}) - H(nu) on every node."""
    _require_role(H, Role.ENTROPY, "multi_lattice")
    singles = np.zeros(H.lattice.size)
    for i in range(H.lattice.n):
        singles[1 << i] = H.values[1 << i]
    summed = zeta(LatticeFunction(H.lattice, singles)).values
    return LatticeFunction(H.lattice, summed - H.values, Role.MULTI)


def multi_information(H: LatticeFunction, nu: SubsetMask) -> float:
    """Total correlation of nu; 0 for the empty set and for singletons."""
    _require_role(H, Role.ENTROPY, "multi_information")
    H.lattice.check(nu)
    return sum(H[1 << i] for i in members(nu)) - H[nu]


def multi_from_interaction(I: LatticeFunction, nu: SubsetMask) -> float:
    """M(nu) = Σ_{tau ⊆ nu, |tau| > 1} (-1)^|tau| I(tau)."""
    _require_role(I, Role.INTERACTION, "multi_from_interaction")
    I.lattice.check(nu)
    return sum(sign_plain(tau) * I[tau] for tau in submasks(nu) if popcount(tau) > 1)


def interaction_from_multi(M: LatticeFunction, nu: SubsetMask) -> float:
    """
    I(nu) = Σ_{tau ⊆ nu, |tau| > 1} (-1)^|tau| M(tau).

    Raises:
        PreconditionError: If |nu| < 2, where M carries no trace of I
    """
    _require_role(M, Role.MULTI, "interaction_from_multi")
    M.lattice.check(nu)
    if popcount(nu) < 2:
        raise PreconditionError("interaction information is recoverable from M only for |nu| ≥ 2")
    return sum(sign_plain(tau) * M[tau] for tau in submasks(nu) if popcount(tau) > 1)


@dataclass(frozen=True)
class DeltaValue:
    """Δ(base; added): the change in I when variable ``added`` joins ``base``."""

    base: SubsetMask
    added: int
    value: float

    def __post_init__(self) -> None:
        if self.added < 0 or self.base < 0:
            raise LatticeError(f"invalid Δ arguments: base {self.base}, added {self.added}")
        if self.base >> self.added & 1:
            raise LatticeError(f"variable {self.added} is already in the base set")


def _check_delta_args(table: MeasureTable, base: SubsetMask, added: int) -> None:
    table.lattice.check(base)
    if not 0 <= added < table.lattice.n:
        raise LatticeError(f"variable index {added} out of range")
    if base >> added & 1:
        raise LatticeError(
            f"{table.lattice.labels[added]} is already in {table.lattice.label(base)}"
        )


def delta_routes(table: MeasureTable, base: SubsetMask, added: int) -> tuple[float, float, float]:
    """
    Δ(base; added) three ways.

    Returns:
        (difference of I values,
         signed entropy sum over the subsets that contain ``added``,
         H(added) plus the signed sum of H(rho ∪ {added}) over non-empty rho ⊆ base)
    """
    _check_delta_args(table, base, added)
    H, I = table.entropy, table.interaction
    bit = 1 << added
    by_difference = I[base | bit] - I[base]
    by_entropy = sum(sign_plus(rho | bit) * H[rho | bit] for rho in submasks(base))
    by_rewrite = H[bit] + sum(
        sign_plain(rho) * H[rho | bit] for rho in submasks(base) if rho != EMPTY
    )
    return by_difference, by_entropy, by_rewrite


def delta(
    table: MeasureTable, base: SubsetMask, added: int, tol: float = DIST_TOLERANCE
) -> DeltaValue:
    """
    Differential interaction information Δ(base; added) = I(base ∪ {added}) - I(base).

    Raises:
        LatticeError: If added is already in base
        ConsistencyError: If the three evaluation routes disagree beyond tol
    """
    routes = delta_routes(table, base, added)
    spread = max(routes) - min(routes)
    if spread > tol:
        raise ConsistencyError(
            f"Δ({table.lattice.label(base)}; {table.lattice.labels[added]}) routes "
            f"disagree by {spread:.3e}: {routes}"
        )
    return DeltaValue(base, added, routes[0])


def delta_from_multi(M: LatticeFunction, base: SubsetMask, added: int) -> float:
    """
    Δ(base; added) from multi-information: signed sum of M over subsets
    containing ``added`` with at least two elements.

    Raises:
        PreconditionError: If |base| < 2
    """
    _require_role(M, Role.MULTI, "delta_from_multi")
    M.lattice.check(base)
    if not 0 <= added < M.lattice.n:
        raise LatticeError(f"variable index {added} out of range")
    if base >> added & 1:
        raise LatticeError(f"variable {added} is already in the base set")
    if popcount(base) < 2:
        raise PreconditionError("the M form of Δ needs a base of at least two variables")
    bit = 1 << added
    return sum(sign_plain(rho | bit) * M[rho | bit] for rho in submasks(base) if rho != EMPTY)


def delta_duality_check(table: MeasureTable, base: SubsetMask, added: int) -> float:
    """
    Residual of the Δ-H duality

        H(base ∪ {added}) - H(added) = Σ_{∅ ≠ tau ⊆ base} (-1)^|tau| Δ(tau; added)

    Raises:
        PreconditionError: If base is empty
    """
    _check_delta_args(table, base, added)
    if base == EMPTY:
        raise PreconditionError("the Δ-H duality needs a non-empty base")
    H, I = table.entropy, table.interaction
    bit = 1 << added
    lhs = H[base | bit] - H[bit]
    rhs = sum(
        sign_plain(tau) * (I[tau | bit] - I[tau]) for tau in submasks(base) if tau != EMPTY
    )
    return abs(lhs - rhs)


def three_variable_residuals(table: MeasureTable, i: int, j: int, k: int) -> list[float]:
    """
    Residuals of the four explicit Δ/H identities for the triple (i, j; k).

    Δ(ij; k) - H(k) = H(ijk) - H(ik) - H(jk)
    Δ(i; k) = H(k) - H(ik)
    Δ(j; k) = H(k) - H(jk)
    H(ijk) - H(k) = Δ(ij; k) - Δ(i; k) - Δ(j; k)
    """
    if len({i, j, k}) != 3:
        raise LatticeError("three distinct variables are required")
    H = table.entropy
    bi, bj, bk = 1 << i, 1 << j, 1 << k
    d_ij = delta(table, bi | bj, k).value
    d_i = delta(table, bi, k).value
    d_j = delta(table, bj, k).value
    return [
        abs((d_ij - H[bk]) - (H[bi | bj | bk] - H[bi | bk] - H[bj | bk])),
        abs(d_i - (H[bk] - H[bi | bk])),
        abs(d_j - (H[bk] - H[bj | bk])),
        abs((H[bi | bj | bk] - H[bk]) - (d_ij - d_i - d_j)),
    ]


def interaction_of(d: JointDistribution, nu: SubsetMask, base: float = DEFAULT_LOG_BASE) -> float:
    """I(nu) straight from marginal entropies of d, without building a lattice."""
    return sum(sign_plus(tau) * subset_entropy(d, tau, base) for tau in submasks(nu) if tau)


def conditional_interaction_oracle(
    d: JointDistribution, v: SubsetMask, W: SubsetMask, base: float = DEFAULT_LOG_BASE
) -> float:
    """
    Σ_w p(w) · I(v) under the conditional distribution d | W = w.

    Conditions jointly on the tuple of W's values.
    """
    if W == EMPTY:
        return interaction_of(d, v, base)
    conditioners = members(W)
    free = [i for i in range(d.n) if not W >> i & 1]
    v_inside = mask_of(free.index(i) for i in members(v))
    total = 0.0
    for w_state, p in sorted(marginal(d, W).pmf.items()):
        if p <= 0.0:
            continue
        sliced = slice_condition(d, dict(zip(conditioners, w_state, strict=True)))
        total += p * interaction_of(sliced, v_inside, base)
    return total


def conditional_interaction(
    table: MeasureTable,
    v: SubsetMask,
    W: SubsetMask,
    cross_check: bool = True,
    tol: float = DIST_TOLERANCE,
) -> float:
    """
    Conditional interaction information I(v | W).

    Evaluated on the lattice as the alternating sum over the interval from v to
    v ∪ W, Σ_{sigma ⊆ W} (-1)^|sigma| I(v ∪ sigma). For a single conditioner this is
    I(v) - I(v ∪ W).

    Args:
        table: Measure table
        v: Non-empty variable set
        W: Conditioning set, disjoint from v
        cross_check: Also evaluate the expectation over W's values and compare
        tol: Agreement tolerance for the cross check

    Raises:
        PreconditionError: If v is empty or overlaps W
        ConsistencyError: If the cross check fails
    """
    lattice = table.lattice
    lattice.check(v)
    lattice.check(W)
    if v == EMPTY:
        raise PreconditionError("conditional interaction needs a non-empty variable set")
    if v & W:
        raise PreconditionError(
            f"{lattice.label(v)} and {lattice.label(W)} overlap; conditioning sets must be disjoint"
        )
    I = table.interaction
    value = sum(sign_plain(sigma) * I[v | sigma] for sigma in submasks(W))

    if cross_check and table.distribution is not None:
        oracle = conditional_interaction_oracle(table.distribution, v, W, table.log_base)
        if abs(oracle - value) > tol:
            raise ConsistencyError(
                f"I({lattice.label(v)} | {lattice.label(W)}): lattice {value!r} "
                f"vs expectation {oracle!r}"
            )
    return value


def chain_decomposition(table: MeasureTable, chain: ChainPath) -> list[DeltaValue]:
    """
    Split I(top) into H(first variable) plus the Δ of every step of the chain.

    The first term is Δ(∅; x) = H(x). The terms sum to I(chain.top).

    Raises:
        LatticeError: If the chain does not ascend from a singleton
    """
    if chain.descending:
        raise LatticeError("chain decomposition walks up the lattice")
    if popcount(chain.bottom) != 1:
        raise LatticeError(
            f"chain must start at a single variable, not {table.lattice.label(chain.bottom)}"
        )
    first = chain.bottom.bit_length() - 1
    terms = [DeltaValue(EMPTY, first, table.entropy[chain.bottom])]
    terms.extend(delta(table, lower, index) for lower, index in chain.steps())
    return terms


@dataclass(frozen=True)
class SymmetrizedDelta:
    """Product of Δ(nu \\ {x}; x) over x ∈ nu, with a per-factor zero test."""

    node: SubsetMask
    factors: tuple[DeltaValue, ...]
    value: float
    collectively_dependent: bool


def symmetrized_delta(
    table: MeasureTable, nu: SubsetMask, tol: float = DIST_TOLERANCE
) -> SymmetrizedDelta:
    """
    Product of the descending-edge weights at nu.

    Raises:
        PreconditionError: If |nu| < 2
    """
    table.lattice.check(nu)
    if popcount(nu) < 2:
        raise PreconditionError("symmetrized Δ needs at least two variables")
    factors = tuple(delta(table, nu & ~(1 << x), x) for x in members(nu))
    value = float(np.prod([f.value for f in factors]))
    dependent = all(abs(f.value) > tol for f in factors)
    return SymmetrizedDelta(nu, factors, value, dependent)


def delta_lattice(table: MeasureTable, added: int) -> LatticeFunction:
    """
    Δ(tau; added) for every tau over the other variables, as a function on the
    lattice one dimension smaller. Δ(∅; added) = H(added).
    """
    _check_delta_args(table, EMPTY, added)
    projection = table.lattice.condition_projection(1 << added)
    I = table.interaction
    values = np.array(
        [I[sigma] - I[sigma & ~(1 << added)] for sigma, _ in projection.pairs()]
    )
    return LatticeFunction(projection.target, values, Role.DELTA)


def conditional_entropy_lattice(table: MeasureTable, W: SubsetMask) -> LatticeFunction:
    """H(sigma | W) = H(sigma ∪ W) - H(W) on the lattice of the variables outside W."""
    projection = table.lattice.condition_projection(W)
    H = table.entropy
    values = np.array([H[sigma] - H[W] for sigma, _ in projection.pairs()])
    return LatticeFunction(projection.target, values, Role.ENTROPY)


def conditional_interaction_lattice(table: MeasureTable, W: SubsetMask) -> LatticeFunction:
    """I(sigma | W) for every sigma outside W, by the interaction transform of H(· | W)."""
    return interaction_lattice(conditional_entropy_lattice(table, W))
