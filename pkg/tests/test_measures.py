"""
Tests for measures module.
"""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infolattice.distributions import JointDistribution, entropy_lattice, from_mapping
from infolattice.errors import ConsistencyError, LatticeError, PreconditionError, RoleError
from infolattice.lattice import EMPTY, ChainPath, PowerSetLattice, popcount, submasks
from infolattice.measures import (
    DeltaValue,
    MeasureTable,
    chain_decomposition,
    conditional_entropy_lattice,
    conditional_interaction,
    conditional_interaction_lattice,
    conditional_interaction_oracle,
    delta,
    delta_duality_check,
    delta_from_multi,
    delta_lattice,
    delta_routes,
    entropy_from_interaction,
    interaction_from_multi,
    interaction_lattice,
    interaction_of,
    measure_table,
    multi_from_interaction,
    multi_information,
    multi_lattice,
    symmetrized_delta,
    three_variable_residuals,
)
from infolattice.transforms import Convention, LatticeFunction, Role, signed_transform
from tests.conftest import bits, random_distribution

TOL = 1e-9

X1, X2, X3 = 0b001, 0b010, 0b100
FULL3 = 0b111


def test_interaction_lattice_independent(independent: JointDistribution) -> None:
    """Test that independence kills every interaction beyond singletons."""
    I = measure_table(independent).interaction
    for tau in I.lattice.nodes():
        expected = 1.0 if popcount(tau) == 1 else 0.0
        assert I[tau] == pytest.approx(expected, abs=TOL)


def test_interaction_lattice_xor(xor: JointDistribution) -> None:
    """Test XOR: zero pair interactions and -1 bit for the triple."""
    I = measure_table(xor).interaction
    assert I[EMPTY] == 0.0
    for pair in (0b011, 0b101, 0b110):
        assert I[pair] == pytest.approx(0.0, abs=TOL)
    assert I[FULL3] == pytest.approx(-1.0, abs=TOL)


def test_interaction_three_variable_expansion(random_pmfs: list[JointDistribution]) -> None:
    """Test I and H against their explicit three-variable expansions."""
    d = next(d for d in random_pmfs if d.n == 3)
    table = measure_table(d)
    H, I = table.entropy, table.interaction
    expected_i = (
        H[X1] + H[X2] + H[X3] - H[X1 | X2] - H[X1 | X3] - H[X2 | X3] + H[FULL3]
    )
    assert I[FULL3] == pytest.approx(expected_i, abs=TOL)
    assert I[X1 | X2] == pytest.approx(H[X1] + H[X2] - H[X1 | X2], abs=TOL)
    expected_h = I[X1] + I[X2] + I[X3] - I[X1 | X2] - I[X1 | X3] - I[X2 | X3] + I[FULL3]
    assert H[FULL3] == pytest.approx(expected_h, abs=TOL)
    assert H[X1] == pytest.approx(I[X1], abs=TOL)


def test_entropy_interaction_round_trip(random_pmfs: list[JointDistribution]) -> None:
    """Test that the H -> I -> H round trip is exact to 1e-12."""
    for d in random_pmfs:
        H = entropy_lattice(d)
        back = entropy_from_interaction(interaction_lattice(H))
        assert np.max(np.abs(back.values - H.values)) < 1e-12 * max(1.0, np.max(H.values))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=2**32 - 1))
def test_duality_holds_for_arbitrary_functions(n: int, seed: int) -> None:
    """Test the duality on random entropy-tagged functions that are not entropies."""
    values = np.random.default_rng(seed).normal(size=1 << n)
    values[EMPTY] = 0.0
    H = LatticeFunction(PowerSetLattice(n), values, Role.ENTROPY)
    back = entropy_from_interaction(interaction_lattice(H))
    assert np.max(np.abs(back.values - H.values)) < 1e-12 * max(1.0, np.max(np.abs(values)))


def test_additive_entropy_from_singleton_interactions() -> None:
    """Test that singleton-only interactions give additive entropies."""
    lattice = PowerSetLattice(3)
    I = LatticeFunction.from_mapping(lattice, {X1: 1.0, X2: 0.5, X3: 2.0}, Role.INTERACTION)
    H = entropy_from_interaction(I)
    assert H[FULL3] == pytest.approx(3.5)
    assert H[X1 | X3] == pytest.approx(3.0)


def test_role_tags_are_enforced(xor: JointDistribution) -> None:
    """Test that transforms reject functions with the wrong role."""
    table = measure_table(xor)
    with pytest.raises(RoleError):
        interaction_lattice(table.interaction)
    with pytest.raises(RoleError):
        entropy_from_interaction(table.entropy)
    with pytest.raises(RoleError):
        interaction_from_multi(table.interaction, FULL3)
    with pytest.raises(RoleError):
        MeasureTable(table.entropy, table.multi, table.interaction)


def test_interaction_lattice_needs_zero_at_empty_set() -> None:
    """Test that H(∅) must be zero."""
    H = LatticeFunction(PowerSetLattice(1), np.array([0.5, 1.0]), Role.ENTROPY)
    with pytest.raises(PreconditionError):
        interaction_lattice(H)


def test_multi_information_examples(
    xor: JointDistribution, independent: JointDistribution, identical: JointDistribution
) -> None:
    """Test M for independent, identical and XOR variables."""
    assert multi_information(entropy_lattice(independent), FULL3) == pytest.approx(0.0, abs=TOL)
    assert multi_information(entropy_lattice(identical), 0b11) == pytest.approx(1.0, abs=TOL)
    H = entropy_lattice(xor)
    assert multi_information(H, FULL3) == pytest.approx(1.0, abs=TOL)
    assert multi_information(H, EMPTY) == 0.0
    assert multi_information(H, X2) == 0.0


def test_multi_lattice_matches_pointwise(random_pmfs: list[JointDistribution]) -> None:
    """Test the vectorized M lattice against the per-node formula and its sign."""
    for d in random_pmfs:
        H = entropy_lattice(d)
        M = multi_lattice(H)
        assert M.role is Role.MULTI
        for nu in M.lattice.nodes():
            assert M[nu] == pytest.approx(multi_information(H, nu), abs=1e-12)
            assert M[nu] >= -TOL


def test_multi_interaction_dualities(random_pmfs: list[JointDistribution]) -> None:
    """Test that M from I and I from M agree with the direct values."""
    for d in random_pmfs:
        table = measure_table(d)
        for nu in table.lattice.nodes():
            assert multi_from_interaction(table.interaction, nu) == pytest.approx(
                table.multi[nu], abs=TOL
            )
            if popcount(nu) >= 2:
                assert interaction_from_multi(table.multi, nu) == pytest.approx(
                    table.interaction[nu], abs=TOL
                )


def test_multi_interaction_examples(xor: JointDistribution) -> None:
    """Test the XOR and single-pair forms of the M/I dualities."""
    table = measure_table(xor)
    assert multi_from_interaction(table.interaction, FULL3) == pytest.approx(1.0, abs=TOL)
    assert interaction_from_multi(table.multi, FULL3) == pytest.approx(-1.0, abs=TOL)
    pair = X1 | X3
    assert interaction_from_multi(table.multi, pair) == pytest.approx(table.multi[pair])
    with pytest.raises(PreconditionError):
        interaction_from_multi(table.multi, X1)


def test_delta_examples(
    xor: JointDistribution, independent: JointDistribution, identical: JointDistribution
) -> None:
    """Test Δ on independent, identical and XOR variables."""
    assert delta(measure_table(independent), X1, 1).value == pytest.approx(-1.0, abs=TOL)
    assert delta(measure_table(identical), X1, 1).value == pytest.approx(0.0, abs=TOL)
    value = delta(measure_table(xor), X1 | X2, 2)
    assert value.value == pytest.approx(-1.0, abs=TOL)
    assert (value.base, value.added) == (X1 | X2, 2)


def test_delta_rejects_member(xor: JointDistribution) -> None:
    """Test that the added variable must lie outside the base."""
    with pytest.raises(LatticeError):
        delta(measure_table(xor), X1 | X2, 1)


def test_delta_routes_agree(random_pmfs: list[JointDistribution]) -> None:
    """Test the three Δ routes on every (base, added) pair."""
    for d in random_pmfs:
        table = measure_table(d)
        for base in table.lattice.nodes():
            for added in range(d.n):
                if base >> added & 1:
                    continue
                routes = delta_routes(table, base, added)
                assert max(routes) - min(routes) < TOL


def test_delta_raises_on_inconsistent_routes() -> None:
    """Test that disagreeing routes raise ConsistencyError."""
    lattice = PowerSetLattice(2)
    H = LatticeFunction(lattice, np.array([0.0, 1.0, 1.0, 1.5]), Role.ENTROPY)
    table = MeasureTable.from_entropy(H)
    shifted = table.interaction.values + np.array([0.0, 0.0, 0.0, 0.5])
    tampered = MeasureTable(H, LatticeFunction(lattice, shifted, Role.INTERACTION), table.multi)
    with pytest.raises(ConsistencyError):
        delta(tampered, X1, 1)


def test_delta_from_multi(random_pmfs: list[JointDistribution], xor: JointDistribution) -> None:
    """Test the M form of Δ for bases of two or more variables."""
    assert delta_from_multi(measure_table(xor).multi, X1 | X2, 2) == pytest.approx(-1.0, abs=TOL)
    for d in random_pmfs:
        if d.n < 4:
            continue
        table = measure_table(d)
        for base in table.lattice.nodes():
            for added in range(d.n):
                if base >> added & 1 or popcount(base) < 2:
                    continue
                assert delta_from_multi(table.multi, base, added) == pytest.approx(
                    delta(table, base, added).value, abs=TOL
                )
    with pytest.raises(PreconditionError):
        delta_from_multi(measure_table(xor).multi, X1, 2)
    with pytest.raises(LatticeError, match="out of range"):
        delta_from_multi(measure_table(xor).multi, X1 | X2, -1)
    with pytest.raises(LatticeError, match="out of range"):
        delta_from_multi(measure_table(xor).multi, X1 | X2, 3)


def test_delta_duality(random_pmfs: list[JointDistribution], xor: JointDistribution) -> None:
    """Test the Δ-H duality residual on every non-empty base."""
    for d in random_pmfs:
        table = measure_table(d)
        for base in range(1, table.lattice.size):
            for added in range(d.n):
                if not base >> added & 1:
                    assert delta_duality_check(table, base, added) < TOL
    with pytest.raises(PreconditionError):
        delta_duality_check(measure_table(xor), EMPTY, 0)


def test_delta_duality_singleton_base(random_pmfs: list[JointDistribution]) -> None:
    """Test that a singleton base reduces to H(12) - H(2) = -Δ(1; 2)."""
    table = measure_table(random_pmfs[0])
    H = table.entropy
    assert H[X1 | X2] - H[X2] == pytest.approx(-delta(table, X1, 1).value, abs=TOL)


def test_three_variable_identities(random_pmfs: list[JointDistribution]) -> None:
    """Test the four explicit three-variable identities for every ordered triple."""
    for d in random_pmfs:
        if d.n < 3:
            continue
        table = measure_table(d)
        for i, j, k in itertools.permutations(range(d.n), 3):
            assert max(three_variable_residuals(table, i, j, k)) < TOL
    with pytest.raises(LatticeError):
        three_variable_residuals(measure_table(random_pmfs[1]), 0, 0, 1)


def test_conditional_interaction_xor(xor: JointDistribution) -> None:
    """Test I(X1;X2 | X3) = 1 bit on XOR, by lattice and by expectation."""
    table = measure_table(xor)
    assert conditional_interaction(table, X1 | X2, X3) == pytest.approx(1.0, abs=TOL)
    assert conditional_interaction_oracle(xor, X1 | X2, X3) == pytest.approx(1.0, abs=TOL)
    # conditioning on both other variables leaves no uncertainty in X1
    assert conditional_interaction(table, X1, X2 | X3) == pytest.approx(0.0, abs=TOL)


def test_conditional_interaction_independent_noise() -> None:
    """Test that conditioning on an independent variable changes nothing."""
    pmf = {
        (a, b, c): (0.4 if a == b else 0.1) * 0.5 for a, b, c in itertools.product((0, 1), repeat=3)
    }
    table = measure_table(from_mapping(bits("A", "B", "C"), pmf))
    assert conditional_interaction(table, X1 | X2, X3) == pytest.approx(
        table.interaction[X1 | X2], abs=TOL
    )


def test_conditional_interaction_two_conditioners_iterates(
    random_pmfs: list[JointDistribution],
) -> None:
    """Test that |W| = 2 equals conditioning on one variable and then the other."""
    d = next(d for d in random_pmfs if d.n == 4)
    table = measure_table(d)
    v, a, b = 0b0011, 0b0100, 0b1000

    def once(mask: int, w: int) -> float:
        return table.interaction[mask] - table.interaction[mask | w]

    iterated = once(v, a) - once(v | b, a)
    assert conditional_interaction(table, v, a | b) == pytest.approx(iterated, abs=TOL)


def test_conditional_interaction_matches_oracle(random_pmfs: list[JointDistribution]) -> None:
    """Test lattice and expectation routes for |W| = 1..3."""
    for d in random_pmfs[:8]:
        table = measure_table(d)
        full = table.lattice.full
        for W in range(1, table.lattice.size):
            if popcount(W) > 3:
                continue
            for v in submasks(full & ~W)[1:]:
                lattice_value = conditional_interaction(table, v, W, cross_check=False)
                oracle = conditional_interaction_oracle(d, v, W)
                assert lattice_value == pytest.approx(oracle, abs=TOL)


def test_conditional_interaction_preconditions(xor: JointDistribution) -> None:
    """Test that overlapping or empty sets are rejected."""
    table = measure_table(xor)
    with pytest.raises(PreconditionError):
        conditional_interaction(table, X1 | X2, X2)
    with pytest.raises(PreconditionError):
        conditional_interaction(table, EMPTY, X2)


def test_chain_decomposition_three_variables(random_pmfs: list[JointDistribution]) -> None:
    """Test both explicit orderings and all six maximal chains at n = 3."""
    d = next(d for d in random_pmfs if d.n == 3)
    table = measure_table(d)
    I, H = table.interaction, table.entropy

    terms = chain_decomposition(table, ChainPath((X1, X1 | X2, FULL3)))
    assert [t.value for t in terms] == pytest.approx(
        [H[X1], delta(table, X1, 1).value, delta(table, X1 | X2, 2).value], abs=TOL
    )
    terms = chain_decomposition(table, ChainPath((X2, X1 | X2, FULL3)))
    assert terms[0].value == pytest.approx(H[X2])
    assert terms[1].added == 0

    for chain in table.lattice.enumerate_chains(EMPTY, FULL3):
        terms = chain_decomposition(table, ChainPath(chain.nodes[1:]))
        assert sum(t.value for t in terms) == pytest.approx(I[FULL3], abs=TOL)


def test_chain_decomposition_five_variables(random_pmfs: list[JointDistribution]) -> None:
    """Test all 120 maximal chains at n = 5."""
    d = next(d for d in random_pmfs if d.n == 5)
    table = measure_table(d)
    chains = table.lattice.enumerate_chains(EMPTY, table.lattice.full)
    assert len(chains) == 120
    for chain in chains:
        terms = chain_decomposition(table, ChainPath(chain.nodes[1:]))
        assert sum(t.value for t in terms) == pytest.approx(
            table.interaction[table.lattice.full], abs=TOL
        )


def test_chain_decomposition_needs_singleton_start(xor: JointDistribution) -> None:
    """Test that chains must start at a single variable and ascend."""
    table = measure_table(xor)
    with pytest.raises(LatticeError):
        chain_decomposition(table, ChainPath((EMPTY, X1, X1 | X2)))
    with pytest.raises(LatticeError):
        chain_decomposition(table, ChainPath((X1, X1 | X2)).reversed())


def test_symmetrized_delta(
    xor: JointDistribution, independent: JointDistribution, identical: JointDistribution
) -> None:
    """Test the descending-edge product on XOR, independent and identical bits."""
    result = symmetrized_delta(measure_table(xor), FULL3)
    assert result.value == pytest.approx(-1.0, abs=TOL)
    assert result.collectively_dependent
    assert len(result.factors) == 3

    result = symmetrized_delta(measure_table(independent), FULL3)
    assert result.value == pytest.approx(0.0, abs=TOL)
    assert not result.collectively_dependent

    result = symmetrized_delta(measure_table(identical), 0b11)
    assert result.value == pytest.approx(0.0, abs=TOL)
    assert not result.collectively_dependent

    with pytest.raises(PreconditionError):
        symmetrized_delta(measure_table(xor), X1)


def test_symmetrized_delta_with_independent_third() -> None:
    """Test that one vanishing factor clears collective dependence despite a dependent pair."""
    d = from_mapping(
        bits("X1", "X2", "X3"),
        {(0, 0, 0): 0.25, (0, 0, 1): 0.25, (1, 1, 0): 0.25, (1, 1, 1): 0.25},
    )
    result = symmetrized_delta(measure_table(d), FULL3)
    by_added = {f.added: f.value for f in result.factors}
    assert by_added[0] == pytest.approx(0.0, abs=TOL)
    assert by_added[1] == pytest.approx(0.0, abs=TOL)
    assert by_added[2] == pytest.approx(-1.0, abs=TOL)
    assert result.value == pytest.approx(0.0, abs=TOL)
    assert not result.collectively_dependent


def test_delta_value_rejects_bad_arguments() -> None:
    """Test that a negative index or base and an overlapping variable are refused."""
    assert DeltaValue(X1, 1, 0.5).value == 0.5
    with pytest.raises(LatticeError, match="invalid"):
        DeltaValue(EMPTY, -1, 0.0)
    with pytest.raises(LatticeError, match="invalid"):
        DeltaValue(-1, 0, 0.0)
    with pytest.raises(LatticeError, match="already"):
        DeltaValue(X1 | X2, 1, 0.0)


def test_delta_lattice_duality(random_pmfs: list[JointDistribution]) -> None:
    """Test that the plain signed transform of the Δ lattice gives H(· ∪ {X})."""
    for d in random_pmfs:
        table = measure_table(d)
        for added in range(d.n):
            D = delta_lattice(table, added)
            assert D.role is Role.DELTA
            assert D[EMPTY] == pytest.approx(table.entropy[1 << added], abs=TOL)
            back = signed_transform(D, Convention.PLAIN)
            projection = table.lattice.condition_projection(1 << added)
            for sigma, rho in projection.pairs():
                assert back[rho] == pytest.approx(table.entropy[sigma], abs=TOL)


def test_conditioned_lattices(random_pmfs: list[JointDistribution]) -> None:
    """Test conditioned H and I lattices against conditional_interaction."""
    for d in random_pmfs:
        table = measure_table(d)
        for W in range(1, table.lattice.size):
            if W == table.lattice.full:
                continue
            Hc = conditional_entropy_lattice(table, W)
            Ic = conditional_interaction_lattice(table, W)
            assert Ic.lattice.n == d.n - popcount(W)
            back = entropy_from_interaction(Ic)
            assert np.max(np.abs(back.values - Hc.values)) < TOL
            projection = table.lattice.condition_projection(W)
            for sigma, rho in projection.pairs()[1:]:
                v = sigma & ~W
                assert Ic[rho] == pytest.approx(
                    conditional_interaction(table, v, W, cross_check=False), abs=TOL
                )


def test_interaction_of_matches_table(random_pmfs: list[JointDistribution]) -> None:
    """Test the direct I evaluation against the lattice transform."""
    d = random_pmfs[5]
    table = measure_table(d)
    for nu in table.lattice.nodes():
        assert interaction_of(d, nu) == pytest.approx(table.interaction[nu], abs=TOL)


def test_relabeling_is_equivariant(rng: np.random.Generator) -> None:
    """Test that permuting variables permutes every measure accordingly."""
    from infolattice.distributions import permute
    from infolattice.lattice import permute_mask

    d = random_distribution(rng, 4)
    order = [2, 0, 3, 1]
    original = measure_table(d)
    moved = measure_table(permute(d, order))
    for nu in original.lattice.nodes():
        target = permute_mask(nu, order)
        assert moved.interaction[target] == pytest.approx(original.interaction[nu], abs=TOL)
        assert moved.multi[target] == pytest.approx(original.multi[nu], abs=TOL)


def test_natural_log_scales_measures(xor: JointDistribution) -> None:
    """Test that nats are bits times ln 2."""
    bits_table = measure_table(xor)
    nats_table = measure_table(xor, log_base=np.e)
    assert nats_table.interaction[FULL3] == pytest.approx(
        bits_table.interaction[FULL3] * np.log(2), abs=TOL
    )
