"""hopfmm: an exact workbench for Hopf-algebraic moment maps.

Presentations of noncommutative algebras by rewriting, Hopf structure
validation, skew pairings and coquasitriangularity, comodule algebras,
moment-map and centrality checks, fusion, Hamiltonian reduction, a
quasi-Poisson bridge, and first-order classical limits.
"""

__version__ = "0.1.0"

from .scalars import (  # noqa: F401
    DualScalar,
    QRat,
    RingMismatch,
    ScalarDivisionError,
    ScalarRing,
    RING_QQ,
    RING_QQ_H,
    RING_QQ_Q,
    RING_QQ_QH,
    ring_by_name,
)
from .limits import (  # noqa: F401
    LimitFamily,
    LimitResult,
    NotFlat,
    classical_limit,
)
