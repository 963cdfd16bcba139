"""Exact-arithmetic homology of partition-type diagram algebras.

Partition diagrams and their composition, the partition / kappa-divisible /
totally propagating / uniform block algebras, idempotent left covers of the
non-permutation ideal with their associated resolutions, and Tor/Ext of the
trivial module checked against a symmetric group oracle.
"""

from .algebra import (
    AlgebraContext,
    AlgebraElement,
    ContextMismatchError,
    augmentation,
    enumerate_basis,
    get_context,
    multiply,
)
from .complexes import (
    ChainComplex,
    HomologyGroup,
    UnsupportedRingError,
    check_exactness,
    cohomology,
    dualize,
    homology,
    homology_all,
)
from .cover import (
    CoverReport,
    CoverSpec,
    IdealSpec,
    detach_generator,
    ideal_basis,
    intersection_basis,
    merge_generator,
    standard_ideals,
    target_ideal_basis,
    verify_cover,
)
from .cover_complex import (
    CoverComplex,
    build_cover_complex,
    sign_count,
    tensor_with_trivial,
)
from .diagrams import (
    BlockStats,
    CompositionResult,
    Diagram,
    DiagramError,
    DiagramParseError,
    Family,
    ResourceGuardError,
    all_diagrams,
    as_permutation,
    bell_number,
    component_stats,
    compose,
    family_predicate,
    is_permutation,
    parse_diagram,
    parse_family,
    permutation_diagram,
    propagating_count,
)
from .linalg import SNFResult, SparseMatrix, smith_normal_form
from .rings import (
    ModRing,
    NotInvertibleError,
    QQ,
    Ring,
    RingParseError,
    ZZ,
    parse_ring,
)
from .torext import (
    BarComplex,
    bar_complex,
    compare,
    compute_ext,
    compute_tor,
    default_truncation,
    group_cohomology,
    group_homology,
    symmetric_group_algebra,
    symmetric_group_diagram_algebra,
)

__version__ = "0.1.0"
