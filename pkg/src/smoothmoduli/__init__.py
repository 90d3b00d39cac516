"""Number of moduli of a plane curve germ that is a union of smooth branches."""

from .branch import (
    UNSEPARATED,
    Branch,
    Orientation,
    contact_order,
    invert_series,
    normalize_branch,
    parse_rational,
)
from .errors import (
    BruteForceLimitError,
    InputError,
    InvariantError,
    ModuliError,
    TreeError,
    UniquenessError,
    UnseparatedBranchesError,
)
from .moduli import (
    CenterReport,
    CurveType,
    ModuliReport,
    classify_type,
    moduli_count,
    saito_number,
    sigma_of_curve,
)
from .solver import (
    SaitoSolution,
    check_admissible,
    delta_from_parents,
    find_admissible,
    find_admissible_bruteforce,
    parity_bracket,
    sigma_vector,
    solve_H,
)
from .tree import (
    ClusterTree,
    Node,
    ancestor_matrix,
    build_tree,
    local_curve,
    neighbors,
    proximity_matrix,
    random_tree,
    tree_from_spec,
)

__version__ = "0.1.0"
