"""Combinatorial derived matroids and exact representation comparisons."""

from .core import (
    ComparableCircuits,
    ElementInBasis,
    EmptyCircuit,
    ExchangeFails,
    GroundSetTooLarge,
    Matroid,
    MatroidError,
    NotABasis,
    from_circuits,
    mask_of,
    set_of,
)
from .derived import (
    CombinatorialBudgetExceeded,
    DerivationTrace,
    DerivedResult,
    DeriveLimits,
    a0_contains,
    a0_minimal,
    b_sequence,
    derive_circuits,
    derive_dependents_explicit,
    derived_stats,
    hanging_extension_check,
    is_dependent_in_derived,
    seed_step_breakdown,
    support_of,
)
from .families import (
    Antichain,
    Family,
    UniverseTooLarge,
    count_upward_closure,
    epsilon_step,
    minimalize,
    up_contains,
)
from .fieldrep import (
    FieldMatrix,
    FieldTooSmall,
    GroundSizeMismatch,
    NotACircuit,
    Representation,
    RepresentationMismatch,
    WeakOrder,
    circuit_vector,
    independent_count,
    longyear_derived,
    matroid_from_matrix,
    ow_derived,
    random_uniform_rep,
    rank_and_kernel,
    weak_order_compare,
)
from .fields import PrimeField, QuadraticExtField, RationalField, field_from_spec
from .generators import (
    Graph,
    ParseError,
    fixture_path,
    graphic,
    k4_graph,
    load_matroid,
    q6,
    save_matroid,
    uniform,
    vamos,
)

__version__ = "0.1.0"
