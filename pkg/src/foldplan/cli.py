"""Command line entry points: extract, replicate, simulate, evaluate,
classify, serve, synth.

Exit codes: 0 success, 1 I/O or malformed input, 2 empty mask,
3 representation mismatch, 4 missing plan for a class.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .classify import (
    DescriptorLibrary,
    descriptor,
    knn_classify,
    load_library,
    save_library,
)
from .errors import (
    EmptyMask,
    EmptySkeleton,
    FoldPlanError,
    MalformedDocument,
    MalformedImage,
    MissingPlanForClass,
    RepresentationMismatch,
    SchemaVersionUnsupported,
)
from .evalharness import (
    AcceptanceOracle,
    load_items,
    load_plans,
    render_report,
    run_evaluation,
)
from .graph import extract_graph, graph_to_dict
from .plan import load_plan, resolve_plan, save_plan
from .raster import MaskConfig, load_image, mask_background, save_mask_png
from .skeleton import thin

EXIT_IO = 1
EXIT_EMPTY_MASK = 2
EXIT_MISMATCH = 3
EXIT_MISSING_PLAN = 4


def _mask_config(args) -> MaskConfig:
    kwargs = {}
    if getattr(args, "threshold", None) is not None:
        kwargs["threshold"] = args.threshold
    if getattr(args, "mode", None) is not None:
        kwargs["threshold_mode"] = args.mode
    return MaskConfig(**kwargs)


def _load_mask(args):
    image = load_image(args.image)
    return mask_background(image, _mask_config(args))


def _out_dir(args) -> Path:
    out = Path(args.out) if args.out else Path.cwd()
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_extract(args) -> int:
    mask = _load_mask(args)
    skel = thin(mask)
    graph = extract_graph(mask, min_spur_len=args.prune)
    out = _out_dir(args)
    stem = Path(args.image).stem
    graph_path = out / f"{stem}.graph.json"
    skel_path = out / f"{stem}.skel.png"
    graph_path.write_text(
        json.dumps(graph_to_dict(graph), separators=(",", ":")) + "\n", encoding="utf-8"
    )
    save_mask_png(skel, skel_path)
    print(graph_path)
    print(skel_path)
    return 0


def _resolved_doc(step: int, ra) -> dict:
    return {
        "step": step,
        "pick_node": ra.pick_node,
        "place_node": ra.place_node,
        "pick": [ra.pick[0], ra.pick[1]],
        "place": [ra.place[0], ra.place[1]],
        "mid_height": ra.mid_height,
        "trajectory": ra.trajectory().to_dict(),
    }


def cmd_replicate(args) -> int:
    plan = load_plan(args.plan)
    mask = _load_mask(args)
    graph = extract_graph(mask, min_spur_len=args.prune)
    resolved = resolve_plan(plan, graph)
    out = _out_dir(args)
    stem = Path(args.image).stem
    doc = {
        "class_label": plan.class_label,
        "actions": [_resolved_doc(k, ra) for k, ra in enumerate(resolved)],
    }
    path = out / f"{stem}.actions.json"
    path.write_text(json.dumps(doc, separators=(",", ":")) + "\n", encoding="utf-8")
    print(path)
    return 0


def cmd_simulate(args) -> int:
    from .foldsim import simulate_plan
    from .reporting import fold_strip

    plan = load_plan(args.plan)
    mask = _load_mask(args)
    results = simulate_plan(mask, plan, min_spur_len=args.prune)
    out = _out_dir(args)
    stem = Path(args.image).stem
    for k, result in enumerate(results):
        save_mask_png(result.mask, out / f"{stem}.fold{k}.png")
    rows_path = out / f"{stem}.folds.csv"
    with open(rows_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(("step", "area", "moved_area", "overlap_area", "clipped_area"))
        for k, r in enumerate(results):
            writer.writerow((k, r.mask.area, r.moved_area, r.overlap_area, r.clipped_area))
    strip_path = out / f"{stem}.folds.png"
    fold_strip([r.mask for r in results], strip_path, initial=mask)
    print(rows_path)
    print(strip_path)
    return 0


def cmd_evaluate(args) -> int:
    from .reporting import accuracy_figure

    items = load_items(args.items, _mask_config(args))
    plans = load_plans(args.plans)
    oracle = AcceptanceOracle(mode="auto", tolerance_fraction=args.tolerance)
    report = run_evaluation(items, plans, oracle, repetitions=args.reps)
    text = render_report(report, format=args.format)
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.md").write_text(render_report(report, "markdown"), encoding="utf-8")
        (out / "report.csv").write_text(render_report(report, "csv"), encoding="utf-8")
        accuracy_figure(report, out / "accuracy.png")
    return 0


def cmd_classify(args) -> int:
    if args.build:
        if not args.items:
            print("error: --build requires --items", file=sys.stderr)
            return EXIT_IO
        entries = []
        for item in load_items(args.items, _mask_config(args)):
            graph = extract_graph(item.mask())
            entries.append((descriptor(graph), item.class_label))
        save_library(DescriptorLibrary(entries=tuple(entries)), args.library)
        print(args.library)
        return 0
    if not args.input:
        print("error: provide --input or --build", file=sys.stderr)
        return EXIT_IO
    lib = load_library(args.library)
    image = load_image(args.input)
    mask = mask_background(image, _mask_config(args))
    label, tally = knn_classify(descriptor(extract_graph(mask)), lib, k=args.k)
    print(label)
    for vote in tally:
        print(f"{vote.label}\t{vote.votes}\t{vote.inverse_distance:.6g}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.listen.rpartition(":")
    app = create_app(plan_dir=args.plans, mask_config=_mask_config(args))
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
    return 0


def cmd_synth(args) -> int:
    from .evalharness import save_truth
    from .raster import save_mask_png as save_png
    from .synth import CLASS_LABELS, SynthParams, reference_plan, synth_garment

    out = Path(args.out)
    items_dir = out / "items"
    plans_dir = out / "plans"
    plans_dir.mkdir(parents=True, exist_ok=True)
    for label in CLASS_LABELS:
        plan = reference_plan(label)
        save_plan(plan, plans_dir / f"{label}.plan.json")
        class_dir = items_dir / label
        class_dir.mkdir(parents=True, exist_ok=True)
        for i in range(args.per_class):
            params = SynthParams(
                garment_class=label, scale=args.scale, jitter=args.jitter, seed=args.seed + i
            )
            item = synth_garment(params, plan=plan)
            save_png(item.image, class_dir / f"{item.item_name}.png")
            save_truth(item.ground_truth, class_dir / f"{item.item_name}.truth.json")
    print(items_dir)
    print(plans_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="foldplan")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_mask_flags(p):
        p.add_argument("--threshold", type=float, default=None, help="mask threshold")
        p.add_argument("--mode", choices=("luminance", "chroma-distance"), default=None)

    p = sub.add_parser("extract", help="image -> graph JSON + skeleton PNG")
    p.add_argument("image")
    p.add_argument("--out", default=None)
    p.add_argument("--prune", type=float, default=None, help="min spur length, px")
    add_mask_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("replicate", help="resolve a plan's actions on an image")
    p.add_argument("plan")
    p.add_argument("image")
    p.add_argument("--out", default=None)
    p.add_argument("--prune", type=float, default=None)
    add_mask_flags(p)
    p.set_defaults(func=cmd_replicate)

    p = sub.add_parser("simulate", help="execute a plan's folds on an image")
    p.add_argument("plan")
    p.add_argument("image")
    p.add_argument("--out", default=None)
    p.add_argument("--prune", type=float, default=None)
    add_mask_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("evaluate", help="replay plans over an item tree")
    p.add_argument("--items", required=True)
    p.add_argument("--plans", required=True)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--tolerance", type=float, default=0.05,
                   help="auto-oracle tolerance as a fraction of bbox diagonal")
    p.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=0)
    add_mask_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("classify", help="KNN over graph descriptors")
    p.add_argument("--library", required=True)
    p.add_argument("--input", default=None)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--build", action="store_true", help="build the library from --items")
    p.add_argument("--items", default=None)
    add_mask_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--listen", default="127.0.0.1:8000")
    p.add_argument("--plans", default=None)
    add_mask_flags(p)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("synth", help="write a synthetic item tree + plans")
    p.add_argument("--out", required=True)
    p.add_argument("--per-class", type=int, default=5, dest="per_class")
    p.add_argument("--jitter", type=float, default=2.0)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RepresentationMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("expected adjacency:", file=sys.stderr)
        print(np.array2string(np.asarray(exc.expected)), file=sys.stderr)
        print("actual adjacency:", file=sys.stderr)
        print(np.array2string(np.asarray(exc.actual)), file=sys.stderr)
        return EXIT_MISMATCH
    except (EmptyMask, EmptySkeleton) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY_MASK
    except MissingPlanForClass as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING_PLAN
    except (MalformedImage, MalformedDocument, SchemaVersionUnsupported, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FoldPlanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
