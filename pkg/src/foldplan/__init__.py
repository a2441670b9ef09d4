"""Interactive garment-folding plan engine.

Silhouette masks are thinned to skeletons, converted to canonical node
graphs, and used to define pick-place folding plans that replicate onto
new garments with matching graph structure. A planar fold simulator, an
evaluation harness, a structural classifier, and an HTTP service round
out the pipeline.
"""

from .errors import (
    DegenerateFold,
    EmptyLibrary,
    EmptyMask,
    EmptySkeleton,
    FoldPlanError,
    MalformedDocument,
    MalformedImage,
    MissingPlanForClass,
    NonPositiveHeight,
    NoPendingAction,
    OffGarment,
    RepresentationMismatch,
    SameNode,
    SchemaVersionUnsupported,
    StepOutOfRange,
    UnknownNode,
)
from .raster import BinaryMask, MaskConfig, RgbImage, load_image, mask_background
from .skeleton import SkeletonMask, thin
from .graph import (
    SkeletonGraph,
    SkeletonNode,
    SkeletonEdge,
    adjacency_matrix,
    build_graph,
    canonicalize,
    extract_graph,
    graph_from_json,
    graph_to_json,
    move_node,
    prune_spurs,
)
from .plan import (
    FoldingAction,
    FoldingPlan,
    ResolvedAction,
    Trajectory,
    add_action,
    define_action,
    load_plan,
    match_representation,
    new_plan,
    resolve_action,
    resolve_plan,
    save_plan,
)
from .foldsim import FoldMap, FoldResult, apply_fold, simulate_plan
from .evalharness import (
    AcceptanceOracle,
    EvaluationReport,
    GarmentItem,
    render_report,
    run_evaluation,
)
from .classify import DescriptorLibrary, GraphDescriptor, descriptor, knn_classify
from .synth import SynthParams, synth_garment

__version__ = "0.1.0"

__all__ = [
    "BinaryMask",
    "MaskConfig",
    "RgbImage",
    "SkeletonMask",
    "SkeletonGraph",
    "SkeletonNode",
    "SkeletonEdge",
    "FoldingAction",
    "FoldingPlan",
    "ResolvedAction",
    "Trajectory",
    "FoldMap",
    "FoldResult",
    "AcceptanceOracle",
    "EvaluationReport",
    "GarmentItem",
    "DescriptorLibrary",
    "GraphDescriptor",
    "SynthParams",
    "FoldPlanError",
    "MalformedImage",
    "MalformedDocument",
    "EmptyMask",
    "EmptySkeleton",
    "UnknownNode",
    "OffGarment",
    "SameNode",
    "NonPositiveHeight",
    "StepOutOfRange",
    "RepresentationMismatch",
    "NoPendingAction",
    "DegenerateFold",
    "SchemaVersionUnsupported",
    "MissingPlanForClass",
    "EmptyLibrary",
    "load_image",
    "mask_background",
    "thin",
    "build_graph",
    "prune_spurs",
    "canonicalize",
    "adjacency_matrix",
    "extract_graph",
    "move_node",
    "graph_to_json",
    "graph_from_json",
    "define_action",
    "new_plan",
    "add_action",
    "match_representation",
    "resolve_action",
    "resolve_plan",
    "save_plan",
    "load_plan",
    "apply_fold",
    "simulate_plan",
    "run_evaluation",
    "render_report",
    "descriptor",
    "knn_classify",
    "synth_garment",
]
