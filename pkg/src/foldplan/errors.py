"""Exception types shared across the folding-plan pipeline."""

from __future__ import annotations


class FoldPlanError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class MalformedImage(FoldPlanError):
    code = "malformed_image"


class EmptyMask(FoldPlanError):
    """No foreground pixel survived masking / thinning input was empty."""

    code = "empty_mask"


class EmptySkeleton(FoldPlanError):
    code = "empty_skeleton"


class UnknownNode(FoldPlanError):
    code = "unknown_node"


class OffGarment(FoldPlanError):
    """A requested position lies on background, not on the garment."""

    code = "off_garment"


class SameNode(FoldPlanError):
    code = "same_node"


class NonPositiveHeight(FoldPlanError):
    code = "non_positive_height"


class StepOutOfRange(FoldPlanError):
    code = "step_out_of_range"


class RepresentationMismatch(FoldPlanError):
    """Adjacency matrix of the new garment differs from the plan's reference.

    Carries both matrices (as nested lists) so callers can display the diff.
    """

    code = "representation_mismatch"

    def __init__(self, expected, actual, message="adjacency matrices differ"):
        super().__init__(message)
        self.expected = [list(row) for row in expected]
        self.actual = [list(row) for row in actual]


class NoPendingAction(FoldPlanError):
    code = "no_pending_action"


class DegenerateFold(FoldPlanError):
    """Pick and place coincide; the fold line is undefined."""

    code = "degenerate_fold"


class MalformedDocument(FoldPlanError):
    code = "malformed_document"


class SchemaVersionUnsupported(FoldPlanError):
    code = "schema_version_unsupported"


class MissingPlanForClass(FoldPlanError):
    code = "missing_plan_for_class"


class EmptyLibrary(FoldPlanError):
    code = "empty_library"
