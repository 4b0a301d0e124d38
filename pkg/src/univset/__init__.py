"""Small k-universal sets, universal tuples, and additive bases in finite
groups, with every output certified by an exact or sampled verifier."""

from ._kernels import BACKEND
from .basis import (
    BasisResult,
    builtin_series,
    covering_set,
    en_basis,
    non_doubling_in_solvable,
)
from .errors import *  # noqa: F401,F403
from .errors import UnivsetError
from .gf import FieldCtx, build_field, dlog, is_prime, line_residue, subspace_lines
from .groups import (
    CyclicGroup,
    Group,
    NormalSeries,
    ProductGroup,
    Subset,
    SymmetricGroup,
    TableGroup,
    cyclic,
    cyclic_subgroup_embedding,
    is_non_doubling,
    is_subgroup,
    make_group,
    product,
    product_complement_embedding,
    product_set,
    right_translate,
    symmetric,
    symmetric_stabilizer_embedding,
    table_group,
    translate,
)
from .powers import (
    BasisGraph,
    build_basis_graph,
    count_paths,
    count_walks_from,
    lower_bound_exponent,
    min_degree_subgraph,
    power_set,
)
from .universal import (
    SingerSets,
    UniversalSetResult,
    UniversalTuple,
    abelian_tuple,
    binary_tuple,
    cyclic_universal,
    lift_tuple,
    random_universal_for,
    singer_universal,
    symmetric_universal,
    tuple_to_universal_set,
)
from .verify import Verdict, verify_basis, verify_tuple, verify_universal_for

__version__ = "0.1.0"
