"""Analysis of higher-order Markov chains through their transition tensors."""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    DomainError,
    GuardExceeded,
    HomcError,
    InconsistentRelation,
    InputError,
    NoNonnegativeVectorFound,
    NonErgodicChain,
    NotConverged,
    NotStochastic,
    OutOfRange,
    ShapeMismatch,
    WrongOrder,
)
from .tensor import (  # noqa: E402
    boxtimes,
    diagonal_part,
    identity_tensor,
    index_map,
    linear_index,
    mode1_matricize,
    multi_index,
    ones_tensor,
    random_stochastic_tensor,
    special_tensor,
    tensor_power,
)
from .validation import check_transition_tensor, validate_stochastic  # noqa: E402
from .reduction import (  # noqa: E402
    ReducedChain,
    entry_locator,
    export_dot,
    recover_kstep,
    reduce_chain,
    reduced_first_passage,
)
from .passage import ever_reaching, first_passage_series, kstep, return_sum_partial  # noqa: E402
from .structure import (  # noqa: E402
    analyze_chain,
    classify_states,
    communication_classes,
    is_ergodic,
    is_irreducible,
    reachability,
    regularity_index,
    verify_class_consistency,
)
from .mfpt import mfpt_reduced, mfpt_residual, solve_mfpt  # noqa: E402
from .limiting import limit_via_powers, limiting_distribution, stationary_distribution  # noqa: E402
from .simulate import estimate, sample_trajectory  # noqa: E402
from .estimator import HigherOrderMarkovChain  # noqa: E402
