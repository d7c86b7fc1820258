"""
Shared fixtures: small analytic distributions and seeded random ones.
"""

import itertools
import json
from pathlib import Path

import numpy as np
import pytest

from infolattice.distributions import JointDistribution, VariableSpec, from_mapping


def bits(*names: str) -> list[VariableSpec]:
    return [VariableSpec(name, 2) for name in names]


def make_xor() -> JointDistribution:
    pmf = {(a, b, a ^ b): 0.25 for a, b in itertools.product((0, 1), repeat=2)}
    return from_mapping(bits("X1", "X2", "X3"), pmf)


def make_independent(n: int = 3) -> JointDistribution:
    names = [f"X{i + 1}" for i in range(n)]
    pmf = {state: 1 / 2**n for state in itertools.product((0, 1), repeat=n)}
    return from_mapping(bits(*names), pmf)


def make_identical() -> JointDistribution:
    return from_mapping(bits("X1", "X2"), {(0, 0): 0.5, (1, 1): 0.5})


def random_distribution(
    rng: np.random.Generator, n: int, cardinality: int = 2, sparsity: float = 0.0
) -> JointDistribution:
    """Dirichlet-ish random pmf over n variables; ``sparsity`` zeroes that share of cells."""
    states = list(itertools.product(range(cardinality), repeat=n))
    weights = rng.random(len(states))
    if sparsity:
        weights[rng.random(len(states)) < sparsity] = 0.0
        if not weights.any():
            weights[0] = 1.0
    weights /= weights.sum()
    specs = [VariableSpec(f"X{i + 1}", cardinality) for i in range(n)]
    return from_mapping(specs, dict(zip(states, weights.tolist(), strict=True)))


@pytest.fixture
def xor() -> JointDistribution:
    return make_xor()


@pytest.fixture
def independent() -> JointDistribution:
    return make_independent(3)


@pytest.fixture
def identical() -> JointDistribution:
    return make_identical()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


@pytest.fixture
def random_pmfs(rng: np.random.Generator) -> list[JointDistribution]:
    """Twenty random pmfs, n = 2..5, some with zero cells and some ternary."""
    out = []
    for k in range(20):
        n = 2 + k % 4
        cardinality = 3 if k % 5 == 0 and n <= 4 else 2
        out.append(random_distribution(rng, n, cardinality, sparsity=0.3 if k % 3 == 0 else 0.0))
    return out


@pytest.fixture
def xor_samples_file(tmp_path: Path) -> Path:
    path = tmp_path / "xor.csv"
    path.write_text("X1,X2,X3\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n")
    return path


@pytest.fixture
def xor_pmf_file(tmp_path: Path) -> Path:
    path = tmp_path / "xor.json"
    document = {
        "variables": [{"name": f"X{i}", "cardinality": 2} for i in (1, 2, 3)],
        "mass": [
            {"values": [a, b, a ^ b], "p": 0.25} for a, b in itertools.product((0, 1), repeat=2)
        ],
    }
    path.write_text(json.dumps(document))
    return path
