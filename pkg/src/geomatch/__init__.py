"""Geometric bipartite matching over compact incidence representations.

Points and ranges are never joined into an explicit incidence graph; covers
of complete bipartite parts stand in for it, and the flow, matching, and
bottleneck machinery runs directly on those parts.
"""

from .bottleneck import (
    BottleneckResult,
    DecideResult,
    PersistenceDiagram,
    SortedMatrix,
    bottleneck_search,
    build_sorted_matrices,
    decide,
    pd_bottleneck,
    select_kth,
)
from .cover import (
    BicliqueCover,
    CoverReport,
    box_cover,
    cover_from_text,
    cover_size,
    cover_to_text,
    trivial_cover,
    validate_cover,
)
from .flow import (
    Flow,
    FlowNetwork,
    Matching,
    SupplyDemand,
    build_network,
    flow_to_matching,
    matching_value,
    max_flow_dinitz,
    validate_matching,
)
from .geometry import Box, Disk, Metric, Point, distance, rotate45, squared_distance
from .implicit_dinitz import (
    Done,
    LevelGraph,
    PhaseState,
    augment_and_project,
    blocking_flow,
    build_level_graph,
    expand_level_graph,
    max_matching_implicit,
    new_phase_state,
)
from .numeric import (
    FLOAT,
    RATIONAL,
    InputError,
    InternalError,
    NumericContext,
    parse_scalar,
    scalar_to_json,
)
from .rblct import RbForest, prune_to_forest

__version__ = "0.1.0"

__all__ = [
    "BicliqueCover",
    "BottleneckResult",
    "Box",
    "CoverReport",
    "DecideResult",
    "Disk",
    "Done",
    "FLOAT",
    "Flow",
    "FlowNetwork",
    "InputError",
    "InternalError",
    "LevelGraph",
    "Matching",
    "Metric",
    "NumericContext",
    "PersistenceDiagram",
    "PhaseState",
    "Point",
    "RATIONAL",
    "RbForest",
    "SortedMatrix",
    "SupplyDemand",
    "augment_and_project",
    "blocking_flow",
    "bottleneck_search",
    "box_cover",
    "build_level_graph",
    "build_network",
    "build_sorted_matrices",
    "cover_from_text",
    "cover_size",
    "cover_to_text",
    "decide",
    "distance",
    "expand_level_graph",
    "flow_to_matching",
    "matching_value",
    "max_flow_dinitz",
    "max_matching_implicit",
    "new_phase_state",
    "parse_scalar",
    "pd_bottleneck",
    "prune_to_forest",
    "rotate45",
    "scalar_to_json",
    "select_kth",
    "squared_distance",
    "trivial_cover",
    "validate_cover",
    "validate_matching",
    "__version__",
]
