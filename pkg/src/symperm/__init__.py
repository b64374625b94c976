"""Matrix permanents and the geometric measure of entanglement for
permutation-invariant states."""

__version__ = "0.1.0"

from .errors import SizeLimitError, SympermError, ValidationError
from .families import (
    WWBarPoint,
    example_a,
    example_b,
    ghz,
    w_bar_state,
    w_state,
    ww_bar,
    ww_bar_sweep,
    ww_bar_theta,
)
from .geometric import (
    OptimizerConfig,
    OptimizerReport,
    build_overlap_matrix,
    conjecture_gap,
    e_log,
    e_sin2,
    lambda_closed_form,
    lambda_qubit,
    maximize_general,
    maximize_symmetric,
    overlap_via_permanent,
)
from .inequalities import (
    InequalityRecord,
    check_averaging_bound,
    check_cll,
    check_maclaurin,
    probe_general_inequality,
    run_trials,
)
from .permanents import (
    MultisetColumns,
    expand_multiset,
    permanent_multiset,
    permanent_naive,
    permanent_ryser,
)
from .states import (
    Composition,
    DenseState,
    ProductState,
    SymmetricState,
    apply_symmetric_unitary,
    averaged_amplitudes,
    compositions,
    dicke_dense,
    multinomial,
    overlap_dense,
    product_to_dense,
    symmetric_product_state,
    symmetric_to_dense,
)

__all__ = [name for name in dir() if not name.startswith("_")]
