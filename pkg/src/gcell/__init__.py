"""Generalized cell structures: inverse sequences of cellular graphs with
finite-depth certificates, quotient approximations, and built-in examples."""

from .errors import (
    CertificateFailure,
    DomainError,
    GcellError,
    ParameterError,
    RangeError,
    ResourceBudgetError,
    UsageError,
)
from .relations import (
    CellularGraph,
    Relation,
    ball,
    ball_set,
    is_transitive_on,
    make_relation,
    two_ball,
)
from .sets import (
    LinearFamily,
    SetOrder,
    SymbolicVertexSet,
    compare_sets,
    intersect_sets,
    subset_of,
    vset,
)
from .system import (
    InverseSystem,
    Truncation,
    bonding_composite,
    check_axioms,
    map_set_down,
    preimages,
)
from .threads import (
    BasicOpen,
    SeparationSetDescriptor,
    ThreadPrefix,
    closedness_probe,
    enumerate_threads,
    extend,
    gcell_certificate,
    in_basic_open,
    prefix_of,
    related_at_depth,
    saturate,
    separation_sets,
    transitivity_counterexample,
)
from .quotient import (
    LevelQuotientSystem,
    Partition,
    QuotientComparison,
    compare_quotients,
    level_quotient_system,
    quotient_at_depth,
)
from .nonregular import (
    NonRegularSystem,
    WitnessReport,
    collapse_indices,
    d_trajectory,
    l_index,
    nonregular_system,
    nonregularity_witness,
)
from .constructions import (
    CircleSystem,
    NatFullSystem,
    VanishingTailSystem,
    WedgeInput,
    WedgeSystem,
    builtin_system,
    circle_identity_variant,
    circle_system,
    nat_full_system,
    vanishing_tail_system,
    wedge_combine,
)
from .dsl import (
    DslError,
    DslSystem,
    SystemDescription,
    parse_dsl,
    render_dsl,
    system_from_dsl,
)
from .report import CheckResult, Report
from .vertices import Vertex, a, b, c, d, nat, rat, user, vertex_name

__all__ = [name for name in dir() if not name.startswith("_")]
