"""Session-oriented HTTP facade over the extract/plan/propose/fold workflow.

State machine per session: a pending action only appears via propose and
only disappears via accept or reset; accept with no pending is an error.
Mutating requests require an If-Match header carrying the version from a
previous response (optimistic concurrency); each successful mutation
increments the version.

Responses depend only on session state and the request, and session ids
are sequential, so replaying a request log against a fresh instance
reproduces every byte. Plan proposals resolve against the graph captured
when the plan was attached, with coordinates carried forward through the
fold maps of every fold executed since; the stored graph itself is always
the fresh re-extraction of the current mask.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import (
    DegenerateFold,
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
from .foldsim import FoldResult, apply_fold, carry_forward
from .graph import SkeletonGraph, extract_graph, graph_to_dict, move_node
from .plan import (
    FoldingPlan,
    ResolvedAction,
    add_action,
    define_action,
    match_representation,
    new_plan,
    plan_from_dict,
    plan_to_dict,
    resolve_action,
    save_plan,
)
from .raster import BinaryMask, MaskConfig, load_image, mask_background, mask_to_png_bytes

_STATUS = {
    MalformedImage: 400,
    MalformedDocument: 400,
    SchemaVersionUnsupported: 400,
    EmptyMask: 422,
    EmptySkeleton: 422,
    NonPositiveHeight: 422,
    UnknownNode: 404,
    NoPendingAction: 404,
    MissingPlanForClass: 404,
    StepOutOfRange: 404,
    OffGarment: 409,
    RepresentationMismatch: 409,
    DegenerateFold: 409,
    SameNode: 409,
}


class ApiError(Exception):
    def __init__(self, status: int, code: str, detail: str):
        super().__init__(detail)
        self.status = status
        self.code = code
        self.detail = detail


@dataclass
class Session:
    id: str
    mask: BinaryMask
    graph: SkeletonGraph
    version: int = 1
    class_label: str | None = None
    plan: FoldingPlan | None = None
    plan_basis: SkeletonGraph | None = None
    plan_fold_start: int = 0
    pending: ResolvedAction | None = None
    pending_step: int | None = None
    executed: list[FoldResult] = field(default_factory=list)
    lock: threading.RLock = field(default_factory=threading.RLock, repr=False)


def _pending_doc(session: Session) -> dict | None:
    if session.pending is None:
        return None
    ra = session.pending
    return {
        "step": session.pending_step,
        "pick_node": ra.pick_node,
        "place_node": ra.place_node,
        "pick": [ra.pick[0], ra.pick[1]],
        "place": [ra.place[0], ra.place[1]],
        "mid_height": ra.mid_height,
        "trajectory": ra.trajectory().to_dict(),
    }


def _session_doc(session: Session) -> dict:
    plan = None
    if session.plan is not None:
        plan = {"class_label": session.plan.class_label, "length": len(session.plan)}
    return {
        "id": session.id,
        "version": session.version,
        "dims": [session.mask.width, session.mask.height],
        "area": session.mask.area,
        "bbox": list(session.mask.bbox()),
        "class_label": session.class_label,
        "plan": plan,
        "pending": _pending_doc(session),
        "executed": len(session.executed),
        "folds": [r.to_dict() for r in session.executed],
    }


class PlanStore:
    """Per-class plan library, optionally persisted to a directory."""

    def __init__(self, directory: Path | None = None):
        self.directory = Path(directory) if directory is not None else None
        self._plans: dict[str, FoldingPlan] = {}
        self._lock = threading.Lock()
        if self.directory is not None and self.directory.is_dir():
            for path in sorted(self.directory.glob("*.plan.json")):
                from .plan import load_plan

                plan = load_plan(path)
                self._plans[plan.class_label] = plan

    def put(self, plan: FoldingPlan) -> None:
        with self._lock:
            self._plans[plan.class_label] = plan
            if self.directory is not None:
                self.directory.mkdir(parents=True, exist_ok=True)
                save_plan(plan, self.directory / f"{plan.class_label}.plan.json")

    def get(self, class_label: str) -> FoldingPlan:
        with self._lock:
            plan = self._plans.get(class_label)
        if plan is None:
            raise MissingPlanForClass(f"no saved plan for class {class_label!r}")
        return plan

    def summaries(self) -> list[dict]:
        with self._lock:
            return [
                {"class_label": label, "length": len(plan)}
                for label, plan in sorted(self._plans.items())
            ]


def create_app(plan_dir=None, mask_config: MaskConfig | None = None) -> FastAPI:
    app = FastAPI(title="foldplan service", docs_url=None, redoc_url=None)
    # Browser dashboards are served from a different origin than the API.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["ETag", "Location"],
    )
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()
    counter = {"n": 0}
    plans = PlanStore(plan_dir)
    default_config = mask_config or MaskConfig()

    def fail(status: int, code: str, detail: str):
        raise ApiError(status, code, detail)

    def get_session(sid: str) -> Session:
        with registry_lock:
            session = sessions.get(sid)
        if session is None:
            fail(404, "UnknownSession", f"no session {sid!r}")
        return session

    def check_version(session: Session, request: Request) -> None:
        header = request.headers.get("if-match")
        if header is None:
            fail(428, "VersionRequired", "mutations require an If-Match header")
        try:
            claimed = int(header.strip().strip('"'))
        except ValueError:
            fail(412, "StaleVersion", f"unparseable If-Match {header!r}")
        if claimed != session.version:
            fail(412, "StaleVersion", f"version is {session.version}, request had {claimed}")

    def json_ok(session: Session, payload: dict, status: int = 200) -> JSONResponse:
        return JSONResponse(payload, status_code=status, headers={"ETag": str(session.version)})

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(
            {"error": exc.code, "detail": exc.detail}, status_code=exc.status
        )

    @app.exception_handler(FoldPlanError)
    async def handle_fold_error(request: Request, exc: FoldPlanError):
        status = _STATUS.get(type(exc), 400)
        body = {"error": exc.code, "detail": str(exc)}
        if isinstance(exc, RepresentationMismatch):
            body["expected"] = exc.expected
            body["actual"] = exc.actual
        return JSONResponse(body, status_code=status)

    # ------------------------------------------------------------------
    # Sessions
    # ------------------------------------------------------------------

    @app.post("/sessions", status_code=201)
    def create_session(
        body: bytes = Body(media_type="image/png"),
        threshold: float | None = None,
        mode: str | None = None,
    ):
        config = default_config
        if threshold is not None or mode is not None:
            config = MaskConfig(
                threshold_mode=mode or default_config.threshold_mode,
                threshold=default_config.threshold if threshold is None else threshold,
                keep_largest_component=default_config.keep_largest_component,
                fill_holes_below=default_config.fill_holes_below,
            )
        image = load_image(body)
        mask = mask_background(image, config)
        graph = extract_graph(mask)
        with registry_lock:
            counter["n"] += 1
            sid = f"s{counter['n']:04d}"
            session = Session(id=sid, mask=mask, graph=graph)
            sessions[sid] = session
        doc = {"id": sid, "version": session.version, "graph": graph_to_dict(graph)}
        return JSONResponse(
            doc,
            status_code=201,
            headers={"Location": f"/sessions/{sid}", "ETag": str(session.version)},
        )

    @app.get("/sessions/{sid}")
    def get_session_state(sid: str):
        session = get_session(sid)
        with session.lock:
            return json_ok(session, _session_doc(session))

    @app.get("/sessions/{sid}/mask.png")
    def get_mask_png(sid: str):
        session = get_session(sid)
        with session.lock:
            data = mask_to_png_bytes(session.mask)
            return Response(
                content=data, media_type="image/png", headers={"ETag": str(session.version)}
            )

    @app.get("/sessions/{sid}/graph")
    def get_graph(sid: str):
        session = get_session(sid)
        with session.lock:
            return json_ok(session, graph_to_dict(session.graph))

    @app.patch("/sessions/{sid}/nodes/{nid}")
    def patch_node(sid: str, nid: int, request: Request, payload: dict = Body(...)):
        session = get_session(sid)
        with session.lock:
            check_version(session, request)
            try:
                x, y = int(payload["x"]), int(payload["y"])
            except (KeyError, TypeError, ValueError) as exc:
                raise MalformedDocument(f"body must carry integer x and y: {exc}") from exc
            session.graph = move_node(session.graph, nid, x, y, session.mask)
            session.version += 1
            node = session.graph.node(nid)
            return json_ok(
                session,
                {
                    "version": session.version,
                    "node": {"id": node.id, "x": node.x, "y": node.y,
                             "kind": node.kind, "moved": node.moved},
                    "graph": graph_to_dict(session.graph),
                },
            )

    # ------------------------------------------------------------------
    # Plans on a session
    # ------------------------------------------------------------------

    def attach_plan(session: Session, plan: FoldingPlan) -> None:
        session.plan = plan
        session.class_label = plan.class_label
        session.plan_basis = session.graph
        session.plan_fold_start = len(session.executed)
        session.pending = None
        session.pending_step = None

    @app.post("/sessions/{sid}/plan")
    def session_plan(sid: str, request: Request, payload: dict = Body(...)):
        session = get_session(sid)
        with session.lock:
            check_version(session, request)
            if "class" in payload:
                attach_plan(session, plans.get(str(payload["class"])))
            elif "plan" in payload:
                attach_plan(session, plan_from_dict(payload["plan"]))
            elif "new" in payload:
                attach_plan(session, new_plan(str(payload["new"]), session.graph))
            elif "add_action" in payload:
                if session.plan is None:
                    raise MissingPlanForClass("session has no active plan")
                fields = payload["add_action"]
                try:
                    pick, place = int(fields["pick"]), int(fields["place"])
                    height = fields.get("mid_height")
                    height = None if height is None else float(height)
                except (KeyError, TypeError, ValueError) as exc:
                    raise MalformedDocument(f"bad add_action body: {exc}") from exc
                action = define_action(session.plan.reference_graph, pick, place, height)
                session.plan = add_action(session.plan, action)
            elif "save" in payload:
                if session.plan is None:
                    raise MissingPlanForClass("session has no active plan")
                plans.put(session.plan)
            else:
                raise MalformedDocument(
                    "body must carry one of: class, plan, new, add_action, save"
                )
            session.version += 1
            summary = {"class_label": session.plan.class_label, "length": len(session.plan)}
            return json_ok(session, {"version": session.version, "plan": summary})

    @app.post("/sessions/{sid}/propose")
    def propose(sid: str, request: Request, payload: dict = Body(...)):
        session = get_session(sid)
        with session.lock:
            check_version(session, request)
            if session.plan is None or session.plan_basis is None:
                raise MissingPlanForClass("session has no active plan")
            try:
                step = int(payload["step"])
            except (KeyError, TypeError, ValueError) as exc:
                raise MalformedDocument(f"body must carry integer step: {exc}") from exc
            match_representation(session.plan, session.plan_basis)
            resolved = resolve_action(session.plan, session.plan_basis, step)
            maps = [r.fold_map for r in session.executed[session.plan_fold_start:]]
            bound = ResolvedAction(
                pick_node=resolved.pick_node,
                place_node=resolved.place_node,
                pick=carry_forward(resolved.pick, maps),
                place=carry_forward(resolved.place, maps),
                mid_height=resolved.mid_height,
            )
            session.pending = bound
            session.pending_step = step
            session.version += 1
            return json_ok(
                session, {"version": session.version, "pending": _pending_doc(session)}
            )

    @app.post("/sessions/{sid}/accept")
    def accept(sid: str, request: Request):
        session = get_session(sid)
        with session.lock:
            check_version(session, request)
            if session.pending is None:
                raise NoPendingAction("no proposed action to accept")
            result = apply_fold(session.mask, session.pending)
            session.executed.append(result)
            session.mask = result.mask
            session.graph = extract_graph(result.mask)
            session.pending = None
            session.pending_step = None
            session.version += 1
            return json_ok(
                session,
                {
                    "version": session.version,
                    "executed": len(session.executed),
                    "fold": result.to_dict(),
                    "graph": graph_to_dict(session.graph),
                },
            )

    @app.post("/sessions/{sid}/reset")
    def reset(sid: str, request: Request):
        session = get_session(sid)
        with session.lock:
            check_version(session, request)
            session.pending = None
            session.pending_step = None
            session.version += 1
            return json_ok(session, {"version": session.version, "pending": None})

    @app.get("/sessions/{sid}/folds/{k}.png")
    def fold_png(sid: str, k: int):
        session = get_session(sid)
        with session.lock:
            if not 0 <= k < len(session.executed):
                raise StepOutOfRange(f"no executed fold {k}")
            data = mask_to_png_bytes(session.executed[k].mask)
            return Response(
                content=data, media_type="image/png", headers={"ETag": str(session.version)}
            )

    # ------------------------------------------------------------------
    # Plan library
    # ------------------------------------------------------------------

    @app.post("/plans", status_code=201)
    def post_plan(payload: dict = Body(...)):
        plan = plan_from_dict(payload)
        plans.put(plan)
        return {"class_label": plan.class_label, "length": len(plan)}

    @app.get("/plans")
    def list_plans():
        return {"plans": plans.summaries()}

    @app.get("/plans/{class_label}")
    def get_plan(class_label: str):
        return plan_to_dict(plans.get(class_label))

    return app
