"""Automatic-execution evaluation: replay per-class plans over garment sets.

For every item and repetition the harness extracts the skeleton graph and
checks it against the plan's reference adjacency. A match counts as one
representation acceptance, after which each plan step is resolved and put
to the acceptance oracle. A mismatch counts as a rejection, and that
repetition's proposals all score zero: a mismatched representation means
the operator would have to redefine the whole plan, so nothing is
salvaged from it.

The oracle mechanizes the human approval step. In auto mode a proposal is
accepted when both its pick and place land within a pixel tolerance of the
item's ground truth for that step (default: 5% of the garment's bbox
diagonal). Items without ground truth are accepted in auto mode; there is
nothing to contradict the proposal.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MalformedDocument, MissingPlanForClass, RepresentationMismatch
from .graph import extract_graph
from .plan import FoldingPlan, ResolvedAction, load_plan, match_representation, resolve_action
from .raster import BinaryMask, MaskConfig, RgbImage, load_image, mask_background

AUTO = "auto"
ALWAYS_ACCEPT = "always-accept"
SCRIPTED = "scripted"

DEFAULT_TOLERANCE_FRACTION = 0.05


@dataclass(frozen=True)
class StepTruth:
    pick: tuple[float, float]
    place: tuple[float, float]


@dataclass(frozen=True)
class GarmentItem:
    class_label: str
    item_name: str
    image: RgbImage | BinaryMask
    # Per-step reference coordinates; indexed like the class plan's actions.
    ground_truth: tuple[StepTruth, ...] | None = None
    mask_config: MaskConfig = field(default_factory=MaskConfig)

    def __post_init__(self):
        if not self.class_label:
            raise ValueError("class_label must be non-empty")

    def mask(self) -> BinaryMask:
        if isinstance(self.image, BinaryMask):
            return self.image
        return mask_background(self.image, self.mask_config)


@dataclass(frozen=True)
class AcceptanceOracle:
    mode: str = AUTO
    tolerance_px: float | None = None
    tolerance_fraction: float | None = None
    script: tuple[bool, ...] = ()

    def __post_init__(self):
        if self.mode not in (AUTO, ALWAYS_ACCEPT, SCRIPTED):
            raise ValueError(f"unknown oracle mode {self.mode!r}")
        for tol in (self.tolerance_px, self.tolerance_fraction):
            if tol is not None and tol < 0:
                raise ValueError("tolerance must be >= 0")

    def tolerance_for(self, mask: BinaryMask) -> float:
        if self.tolerance_px is not None:
            return self.tolerance_px
        frac = self.tolerance_fraction
        if frac is None:
            frac = DEFAULT_TOLERANCE_FRACTION
        return frac * mask.bbox_diagonal()

    def accept(
        self,
        resolved: ResolvedAction,
        truth: StepTruth | None,
        mask: BinaryMask,
        ordinal: int,
    ) -> bool:
        if self.mode == ALWAYS_ACCEPT:
            return True
        if self.mode == SCRIPTED:
            if ordinal >= len(self.script):
                raise ValueError(f"scripted oracle exhausted at proposal {ordinal}")
            return self.script[ordinal]
        if truth is None:
            return True
        tol = self.tolerance_for(mask)
        return (
            math.dist(resolved.pick, truth.pick) <= tol
            and math.dist(resolved.place, truth.place) <= tol
        )


@dataclass(frozen=True)
class EvaluationRow:
    class_label: str
    plan_length: int
    item_name: str
    representation_accepted: int
    representation_total: int
    proposal_accepted: int
    proposal_total: int

    @property
    def representation_accuracy(self) -> str:
        return f"{self.representation_accepted}/{self.representation_total}"

    @property
    def proposal_accuracy(self) -> str:
        return f"{self.proposal_accepted}/{self.proposal_total}"


@dataclass(frozen=True)
class EvaluationReport:
    rows: tuple[EvaluationRow, ...]
    repetitions: int

    def accepted_totals(self) -> tuple[int, int, int, int]:
        """(rep accepted, rep total, proposal accepted, proposal total)."""
        ra = sum(r.representation_accepted for r in self.rows)
        rt = sum(r.representation_total for r in self.rows)
        pa = sum(r.proposal_accepted for r in self.rows)
        pt = sum(r.proposal_total for r in self.rows)
        return ra, rt, pa, pt


def run_evaluation(
    items: list[GarmentItem],
    plans: dict[str, FoldingPlan],
    oracle: AcceptanceOracle,
    repetitions: int = 3,
) -> EvaluationReport:
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    for item in items:
        if item.class_label not in plans:
            raise MissingPlanForClass(f"no plan for class {item.class_label!r}")

    rows = []
    ordinal = 0  # global proposal counter, drives scripted oracles
    for item in sorted(items, key=lambda i: (i.class_label, i.item_name)):
        plan = plans[item.class_label]
        mask = item.mask()
        rep_ok = 0
        prop_ok = 0
        for _ in range(repetitions):
            graph = extract_graph(mask)
            try:
                match_representation(plan, graph)
            except RepresentationMismatch:
                ordinal += len(plan)
                continue
            rep_ok += 1
            for step in range(len(plan)):
                resolved = resolve_action(plan, graph, step)
                truth = None
                if item.ground_truth is not None and step < len(item.ground_truth):
                    truth = item.ground_truth[step]
                if oracle.accept(resolved, truth, mask, ordinal):
                    prop_ok += 1
                ordinal += 1
        rows.append(
            EvaluationRow(
                class_label=item.class_label,
                plan_length=len(plan),
                item_name=item.item_name,
                representation_accepted=rep_ok,
                representation_total=repetitions,
                proposal_accepted=prop_ok,
                proposal_total=repetitions * len(plan),
            )
        )
    return EvaluationReport(rows=tuple(rows), repetitions=repetitions)


# ---------------------------------------------------------------------------
# Directory loading: <class>/<item>.png plus optional <item>.truth.json
# ---------------------------------------------------------------------------

def _load_truth(path: Path) -> tuple[StepTruth, ...]:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
        steps = tuple(
            StepTruth(
                pick=(float(s["pick"][0]), float(s["pick"][1])),
                place=(float(s["place"][0]), float(s["place"][1])),
            )
            for s in doc["steps"]
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, IndexError) as exc:
        raise MalformedDocument(f"bad truth file {path}: {exc}") from exc
    return steps


def save_truth(truth, path) -> None:
    doc = {
        "version": 1,
        "steps": [
            {"pick": [t.pick[0], t.pick[1]], "place": [t.place[0], t.place[1]]}
            for t in truth
        ],
    }
    Path(path).write_text(json.dumps(doc, separators=(",", ":")) + "\n", encoding="utf-8")


def load_items(directory, mask_config: MaskConfig | None = None) -> list[GarmentItem]:
    """Read garment items from a `<class>/<item>.png` tree."""
    root = Path(directory)
    config = mask_config or MaskConfig()
    items = []
    for class_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for png in sorted(class_dir.glob("*.png")):
            truth_path = png.with_suffix("").with_suffix(".truth.json")
            truth = _load_truth(truth_path) if truth_path.is_file() else None
            items.append(
                GarmentItem(
                    class_label=class_dir.name,
                    item_name=png.stem,
                    image=load_image(png),
                    ground_truth=truth,
                    mask_config=config,
                )
            )
    return items


def load_plans(directory) -> dict[str, FoldingPlan]:
    """Read every `<class>.plan.json` in a directory, keyed by class label."""
    plans = {}
    for path in sorted(Path(directory).glob("*.plan.json")):
        plan = load_plan(path)
        plans[plan.class_label] = plan
    return plans


# ---------------------------------------------------------------------------
# Report rendering
# ---------------------------------------------------------------------------

_CSV_HEADER = ("class", "plan_length", "item", "representation_accuracy", "proposal_accuracy")


def render_report(report: EvaluationReport, format: str = "markdown") -> str:
    rows = sorted(report.rows, key=lambda r: (r.class_label, r.item_name))
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_CSV_HEADER)
        for r in rows:
            writer.writerow(
                (r.class_label, r.plan_length, r.item_name,
                 r.representation_accuracy, r.proposal_accuracy)
            )
        return buf.getvalue()
    if format == "markdown":
        lines = [
            "| Class | \\|folding plan\\| | Item | Representation Accuracy | Proposal Accuracy |",
            "| --- | --- | --- | --- | --- |",
        ]
        for r in rows:
            lines.append(
                f"| {r.class_label} | {r.plan_length} | {r.item_name} "
                f"| {r.representation_accuracy} | {r.proposal_accuracy} |"
            )
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {format!r}")
