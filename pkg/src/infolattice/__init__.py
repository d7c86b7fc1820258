"""
infolattice: multivariate information measures on power-set lattices.

Computes joint entropy, interaction information, multi-information and
differential interaction information over every variable subset, and checks
the Möbius dualities, conditioning projections and chain sum rules that tie
them together.
"""

__version__ = "0.1.0"
__license__ = "MIT"

from infolattice.distributions import JointDistribution, VariableSpec
from infolattice.lattice import ChainPath, PowerSetLattice
from infolattice.measures import MeasureTable, measure_table
from infolattice.transforms import LatticeFunction, Role

__all__ = [
    "ChainPath",
    "JointDistribution",
    "LatticeFunction",
    "MeasureTable",
    "PowerSetLattice",
    "Role",
    "VariableSpec",
    "__version__",
    "measure_table",
]
