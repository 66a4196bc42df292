"""cloneforge: clones of finitary operations on small finite domains.

Completeness via the maximal-clone witness families, Sheffer tests,
closure computation, and minimal-clone classification and census.
"""

__version__ = "0.1.0"

from .closure import (
    DEFAULT_CAP,
    ClonePart,
    Verdict,
    clone_part,
    complete_bruteforce,
    generates,
    part_statistics,
)
from .core import (
    Operation,
    analyze,
    builtin,
    canonical_key,
    compose,
    conjugate,
    essential_vars,
    is_projection,
    make_operation,
    minor,
    projection,
    star_extension,
)
from .errors import CloneError
from .maximal import (
    CompletenessReport,
    MaximalWitness,
    gen_all_maximal,
    gen_type,
    is_complete,
    is_functionally_complete,
    is_sheffer,
    slupecki_criterion,
)
from .minimal import (
    EnumerationReport,
    MinimalityReport,
    MinimalType,
    check_identities,
    classify_minimal_type,
    clones_equal,
    clones_similar,
    conservative_minimal_check,
    detect_boolean_group_sum,
    enumerate_minimal_clones,
    essential_minimality_typeA,
    has_taylor_witness,
    is_minimal_clone,
    minimal_arity_witness,
)
from .relations import (
    Relation,
    affine_relation,
    bp_membership,
    center,
    in_affine_clone,
    is_rigid,
    make_relation,
    pol_part,
    preserves,
    profile,
    slupecki,
    slupecki_membership,
)
