"""Exact geometry for periodic, semilinear and smooth sets of vectors over N^n."""

from .cones import ConeH, ConeV, DefinableCone
from .decompose import (
    AnnotatedProvider,
    BoxHeuristicProvider,
    common_partition,
    find_infinite_line,
    full_linear_partition,
    partition,
    semilinearity_decide,
    theorem1_partition,
)
from .errors import *  # noqa: F401,F403
from .extraction import ConeFamily, complete_extraction, reducibility
from .periodic import FullPeriodic, GeneratorPeriodic, Lattice, fill
from .semilinear import HybridLinear, LinearSet, Semilinear
from .smooth import AlmostHybridRep
from .vas import Vas, bounded_reach, catalog

__version__ = "0.1.0"
