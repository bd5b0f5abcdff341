"""Initial index, ramification and monomial blow-ups for valuation extensions on Z^n."""

from .blowup import (
    Frame,
    PmtStep,
    Relation2,
    make_divisible,
    monomial_value,
    paired_step_rank1,
    pmt,
    rank2_normalize,
    reduce_fraction_supports,
    replay,
)
from .extension import (
    DenseRank1,
    ExtensionRecord,
    Lattice,
    Truth,
    defect,
    family_check,
    initial_index_ext,
    ramification_index,
    statement_profile,
)
from .lattice import (
    Subgroup,
    canonicalize,
    decompose,
    epsilon_chain,
    group_index,
    initial_index,
    lex_compare,
    quotient_invariants,
    semigroup_cover,
    unit_triangular_criterion,
)

__version__ = "0.1.0"
