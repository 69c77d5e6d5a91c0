"""Semi-stable models of double covers of curves from cluster data.

Typical use::

    from twocover import parse_cover_spec, run_pipeline
    res = run_pipeline(parse_cover_spec(text))
    res.group.invariant_factors, res.tamagawa
"""

from .branch_data import (
    INF,
    BranchDatum,
    CoverSpec,
    GaloisDatum,
    branch_datum_from_points,
    depths_from_rational_points,
    parse_cover_spec,
    render_cover_spec,
    validate_branch_datum,
)
from .clusters import (
    ClusterPicture,
    apply_label_permutation,
    build_cluster_picture,
    parse_ascii,
    render_ascii,
)
from .discs import build_disc_collection, classify_fiber, disc_invariant_v, disc_tree
from .dual_graph import build_dual_graph, export_dot, frobenius_automorphism, subdivide
from .errors import (
    EnumerationLimitError,
    GraphError,
    HypothesisError,
    LatticeError,
    NotAnAutomorphism,
    NotSemistableError,
    ParseError,
    TwoCoverError,
    ValidationError,
)
from .lattice import (
    component_group,
    cycle_basis,
    fixed_point_count,
    induced_action,
    smith_normal_form,
    spanning_tree_count,
)
from .pipeline import (
    NormalizationInputs,
    VolumeReport,
    hitchin_discriminant_points,
    normalized_volume,
    run_pipeline,
    tamagawa_number,
    volume_report,
)
from .semistability import check_semistable, reduction_type

__version__ = "0.1.0"
