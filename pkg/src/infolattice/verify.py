"""
Identity verification suite.

Every family recomputes one relationship between the measures by an
independent route and reports the largest residual found. The identities are
theorems, so a failure points at an implementation bug or a broken input.
"""

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from rich.console import Console
from rich.table import Table

from infolattice.config import RunConfig
from infolattice.distributions import JointDistribution, permute
from infolattice.lattice import (
    EMPTY,
    ChainPath,
    SubsetMask,
    members,
    permute_mask,
    popcount,
    submasks,
)
from infolattice.measures import (
    MeasureTable,
    chain_decomposition,
    conditional_entropy_lattice,
    conditional_interaction,
    conditional_interaction_lattice,
    conditional_interaction_oracle,
    delta_duality_check,
    delta_from_multi,
    delta_lattice,
    delta_routes,
    entropy_from_interaction,
    interaction_from_multi,
    interaction_lattice,
    measure_table,
    multi_from_interaction,
    multi_information,
    three_variable_residuals,
)
from infolattice.sumrules import (
    chain_sum,
    sum_rule_same_endpoint,
    verify_path_independence,
)
from infolattice.transforms import (
    Convention,
    LatticeFunction,
    cancellation_table,
    mobius_invert,
    mobius_invert_naive,
    relative_residual,
    signed_double_sum,
    signed_transform,
    signed_transform_naive,
    zeta,
    zeta_naive,
)

logger = logging.getLogger(__name__)
console = Console()

# beyond these sizes the enumerating families check a bounded neighbourhood
FULL_ENUMERATION_N = 6
NAIVE_ORACLE_N = 10
MAX_CONDITIONED_SET = 3


@dataclass(frozen=True)
class FamilyResult:
    """Outcome of one identity family."""

    name: str
    instances: int
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance

    def as_record(self) -> dict[str, object]:
        return {
            "family": self.name,
            "instances": self.instances,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class VerificationReport:
    n: int
    families: list[FamilyResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.families)

    @property
    def max_residual(self) -> float:
        return max((f.max_residual for f in self.families), default=0.0)


@dataclass(frozen=True)
class _Context:
    table: MeasureTable
    distribution: JointDistribution
    config: RunConfig

    @property
    def n(self) -> int:
        return self.table.lattice.n

    @property
    def full(self) -> SubsetMask:
        return self.table.lattice.full


def _result(name: str, residuals: list[float], tolerance: float) -> FamilyResult:
    worst = max(residuals, default=0.0)
    logger.debug("%s: %d instances, max residual %.3e", name, len(residuals), worst)
    return FamilyResult(name, len(residuals), worst, tolerance)


def _delta_pairs(n: int) -> Iterator[tuple[SubsetMask, int]]:
    for base in range(1 << n):
        for added in range(n):
            if not base >> added & 1:
                yield base, added


def _check_entropy_interaction(ctx: _Context) -> FamilyResult:
    H = ctx.table.entropy
    back = entropy_from_interaction(interaction_lattice(H))
    residual = relative_residual(H.values, back.values)
    return _result("H↔I duality", [residual], ctx.config.tol_exact)


def _check_involution(ctx: _Context) -> FamilyResult:
    residuals = []
    for fn in (ctx.table.entropy, ctx.table.interaction, ctx.table.multi):
        generic = LatticeFunction(fn.lattice, fn.values)
        for convention in Convention:
            twice = signed_transform(signed_transform(generic, convention), convention)
            residuals.append(relative_residual(generic.values, twice.values))
            if ctx.n <= NAIVE_ORACLE_N:
                residuals.append(
                    relative_residual(
                        signed_transform_naive(generic, convention).values,
                        signed_transform(generic, convention).values,
                    )
                )
        residuals.append(relative_residual(generic.values, mobius_invert(zeta(generic)).values))
        if ctx.n <= NAIVE_ORACLE_N:
            residuals.append(relative_residual(zeta_naive(generic).values, zeta(generic).values))
            inverted = mobius_invert(generic).values
            residuals.append(relative_residual(mobius_invert_naive(generic).values, inverted))
    return _result("signed transform involution", residuals, ctx.config.tol_exact)


def _check_cancellation(ctx: _Context) -> FamilyResult:
    residuals = []
    for m in range(1, min(max(ctx.n, 1), 6) + 1):
        table = cancellation_table(m)
        residuals.extend(
            float(abs(x)) for x in table.row_sums - table.expected_row_sums()
        )
    H = ctx.table.entropy
    if ctx.n <= 8:
        scale = max(1.0, float(np.max(np.abs(H.values))))
        residuals.extend(
            abs(signed_double_sum(H, nu) - H[nu]) / scale for nu in H.lattice.nodes()
        )
    return _result("cancellation table", residuals, ctx.config.tol_exact)


def _check_multi_from_interaction(ctx: _Context) -> FamilyResult:
    H, I, M = ctx.table.entropy, ctx.table.interaction, ctx.table.multi
    residuals = []
    for nu in H.lattice.nodes():
        if popcount(nu) < 2:
            continue
        direct = multi_information(H, nu)
        residuals.append(abs(direct - multi_from_interaction(I, nu)))
        residuals.append(abs(direct - M[nu]))
    return _result("M from I", residuals, ctx.config.tol_dist)


def _check_interaction_from_multi(ctx: _Context) -> FamilyResult:
    I, M = ctx.table.interaction, ctx.table.multi
    residuals = [
        abs(interaction_from_multi(M, nu) - I[nu]) for nu in I.lattice.nodes() if popcount(nu) >= 2
    ]
    return _result("I from M", residuals, ctx.config.tol_dist)


def _check_delta_routes(ctx: _Context) -> FamilyResult:
    residuals = []
    for base, added in _delta_pairs(ctx.n):
        routes = delta_routes(ctx.table, base, added)
        residuals.append(max(routes) - min(routes))
    return _result("Δ routes", residuals, ctx.config.tol_dist)


def _check_delta_from_multi(ctx: _Context) -> FamilyResult:
    residuals = []
    for base, added in _delta_pairs(ctx.n):
        if popcount(base) < 2:
            continue
        by_difference = delta_routes(ctx.table, base, added)[0]
        residuals.append(abs(delta_from_multi(ctx.table.multi, base, added) - by_difference))
    return _result("Δ from M", residuals, ctx.config.tol_dist)


def _check_delta_entropy(ctx: _Context) -> FamilyResult:
    residuals = [
        delta_duality_check(ctx.table, base, added)
        for base, added in _delta_pairs(ctx.n)
        if base != EMPTY
    ]
    return _result("Δ↔H duality", residuals, ctx.config.tol_dist)


def _check_three_variable(ctx: _Context) -> FamilyResult:
    residuals = []
    for triple in combinations(range(ctx.n), 3):
        for k in triple:
            i, j = (x for x in triple if x != k)
            residuals.extend(three_variable_residuals(ctx.table, i, j, k))
    return _result("three-variable Δ identities", residuals, ctx.config.tol_dist)


def _check_conditional(ctx: _Context) -> FamilyResult:
    table, d = ctx.table, ctx.distribution
    I = table.interaction
    residuals = []
    for v in range(1, 1 << ctx.n):
        if popcount(v) > MAX_CONDITIONED_SET:
            continue
        for W in submasks(ctx.full & ~v):
            if W == EMPTY or popcount(W) > MAX_CONDITIONED_SET:
                continue
            lattice_value = conditional_interaction(table, v, W, cross_check=False)
            oracle = conditional_interaction_oracle(d, v, W, table.log_base)
            residuals.append(abs(lattice_value - oracle))
            if popcount(W) == 1:
                residuals.append(abs(lattice_value - (I[v] - I[v | W])))
    return _result("conditional oracle", residuals, ctx.config.tol_dist)


def _check_conditioned_lattices(ctx: _Context) -> FamilyResult:
    table = ctx.table
    residuals = []
    for W in range(1, 1 << ctx.n):
        if popcount(W) > MAX_CONDITIONED_SET:
            continue
        projection = table.lattice.condition_projection(W)
        conditioned_h = conditional_entropy_lattice(table, W)
        conditioned_i = conditional_interaction_lattice(table, W)
        back = entropy_from_interaction(conditioned_i)
        residuals.append(float(np.max(np.abs(back.values - conditioned_h.values))))
        for sigma, rho in projection.pairs():
            v = sigma & ~W
            if v == EMPTY:
                continue
            residuals.append(
                abs(conditioned_i[rho] - conditional_interaction(table, v, W, cross_check=False))
            )
    return _result("conditioned-lattice duality", residuals, ctx.config.tol_dist)


def _check_delta_lattice(ctx: _Context) -> FamilyResult:
    H = ctx.table.entropy
    residuals = []
    for added in range(ctx.n):
        deltas = delta_lattice(ctx.table, added)
        projection = ctx.table.lattice.condition_projection(1 << added)
        joined = np.array([H[sigma] for sigma, _ in projection.pairs()])
        recovered = signed_transform(deltas, Convention.PLAIN).values
        residuals.append(float(np.max(np.abs(recovered - joined))))
    return _result("Δ-lattice duality", residuals, ctx.config.tol_dist)


def _maximal_chains(ctx: _Context) -> list[ChainPath]:
    lattice = ctx.table.lattice
    if ctx.n <= FULL_ENUMERATION_N:
        return lattice.enumerate_chains(EMPTY, ctx.full)
    return [
        ChainPath.from_order(EMPTY, [x] + [y for y in range(ctx.n) if y != x])
        for x in range(ctx.n)
    ]


def _check_chain_decomposition(ctx: _Context) -> FamilyResult:
    I = ctx.table.interaction
    residuals = []
    for chain in _maximal_chains(ctx):
        if ctx.n == 0:
            break
        upper = ChainPath(chain.nodes[1:])
        terms = chain_decomposition(ctx.table, upper)
        residuals.append(abs(sum(t.value for t in terms) - I[ctx.full]))
    return _result("chain decomposition", residuals, ctx.config.tol_dist)


def _check_path_independence(ctx: _Context) -> FamilyResult:
    max_steps = 5 if ctx.n <= FULL_ENUMERATION_N else 2
    residuals = []
    for F in (ctx.table.entropy, ctx.table.interaction, ctx.table.multi):
        for b in F.lattice.nodes():
            for a in submasks(b):
                if popcount(b & ~a) <= max_steps:
                    residuals.append(verify_path_independence(F, a, b))
    return _result("path independence", residuals, ctx.config.tol_dist)


def _check_same_endpoint(ctx: _Context) -> FamilyResult:
    residuals = []
    for F in (ctx.table.entropy, ctx.table.interaction, ctx.table.multi):
        rules = sum_rule_same_endpoint(F, submasks(ctx.full), ctx.full)
        residuals.extend(rule.residual for rule in rules)
        if ctx.n:
            top_down = ChainPath.from_order(EMPTY, range(ctx.n)).reversed()
            residuals.append(abs(chain_sum(F, top_down) - (F[EMPTY] - F[ctx.full])))
    return _result("same-endpoint sum rules", residuals, ctx.config.tol_dist)


def _check_relabeling(ctx: _Context) -> FamilyResult:
    order = list(reversed(range(ctx.n)))
    moved = measure_table(permute(ctx.distribution, order), ctx.table.log_base, ctx.config.max_n)
    residuals = []
    for nu in ctx.table.lattice.nodes():
        target = permute_mask(nu, order)
        residuals.append(abs(ctx.table.interaction[nu] - moved.interaction[target]))
        residuals.append(abs(ctx.table.multi[nu] - moved.multi[target]))
    return _result("relabeling equivariance", residuals, ctx.config.tol_dist)


FAMILIES: tuple[Callable[[_Context], FamilyResult], ...] = (
    _check_entropy_interaction,
    _check_involution,
    _check_cancellation,
    _check_multi_from_interaction,
    _check_interaction_from_multi,
    _check_delta_routes,
    _check_delta_from_multi,
    _check_delta_entropy,
    _check_three_variable,
    _check_conditional,
    _check_conditioned_lattices,
    _check_delta_lattice,
    _check_chain_decomposition,
    _check_path_independence,
    _check_same_endpoint,
    _check_relabeling,
)


def run_verification(d: JointDistribution, config: RunConfig) -> VerificationReport:
    """
    Run every identity family on one distribution.

    Args:
        d: A valid distribution
        config: Tolerances, log base and dimension cap

    Returns:
        Report with one result per family, in a fixed order
    """
    table = measure_table(d, config.log_base, config.max_n)
    ctx = _Context(table, d, config)
    report = VerificationReport(ctx.n, [check(ctx) for check in FAMILIES])
    logger.info("verification %s", "passed" if report.passed else "failed")
    return report


def show_report(report: VerificationReport) -> None:
    """Print the report as a table, one row per family."""
    table = Table(title=f"Identity verification ({report.n} variables)", show_header=True)
    table.add_column("Family", style="cyan")
    table.add_column("Instances", justify="right")
    table.add_column("Max residual", justify="right")
    table.add_column("Tolerance", justify="right")
    table.add_column("Status", justify="center")

    for family in report.families:
        status = "[green]✓ PASS[/green]" if family.passed else "[red]✗ FAIL[/red]"
        table.add_row(
            family.name,
            str(family.instances),
            f"{family.max_residual:.3e}",
            f"{family.tolerance:.0e}",
            status,
        )

    console.print(table)
    console.print()
    if report.passed:
        console.print("[bold green]✓ All identity families passed.[/bold green]")
    else:
        failed = sum(not f.passed for f in report.families)
        console.print(f"[bold red]✗ {failed} identity family(ies) failed.[/bold red]")
