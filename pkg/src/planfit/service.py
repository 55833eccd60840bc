"""HTTP API for interactive estimation sessions.

A session tracks one estimator state and at most one pending situation. The
human (or the console UI) submits situations and vertex decisions; every
decision becomes an observation, updates the estimate, and is appended to the
session's JSON-lines event file, which is sufficient to rebuild the session.
All geometry the UI needs is precomputed here; the client holds no solver
logic.
"""

from __future__ import annotations

import json
import math
import os
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .core import Dms
from .errors import (
    NoObservations,
    NotAVertex,
    PlanfitError,
    ZeroSum,
)
from .estimator import (
    EstimateState,
    estimate,
    estimate_records,
    ingest,
    make_observation,
    predict_plan,
    should_stop,
    step_deltas,
)
from .lpsolve import _edge_interval, enumerate_vertices
from .reduction import build_constraints, reconstruct_plan
from .simulation import gen_dms

MODES = ("learn", "assist")


class CreateSessionBody(BaseModel):
    m: int = 2
    n: int = 3
    window: int | None = None
    mode: str = "learn"


class SituationBody(BaseModel):
    supply: list[float]
    demand: list[float]


class GenerateBody(BaseModel):
    lo: int = 1
    hi: int = 100
    seed: int | None = None


class DecisionBody(BaseModel):
    point: list[float]


@dataclass(eq=False)
class Session:
    id: str
    m: int
    n: int
    window: int | None
    mode: str
    state: EstimateState
    pending: Dms | None = None
    log: list[dict] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _fail(status: int, name: str, detail: str):
    raise HTTPException(status_code=status, detail={"error": name, "detail": detail})


def _clean(v):
    if isinstance(v, float) and math.isnan(v):
        return None
    return v


def _geometry(dms: Dms) -> dict:
    lpp = build_constraints(dms)
    vertices = enumerate_vertices(lpp)
    edges = []
    if len(vertices) >= 2:
        count = len(vertices) if len(vertices) > 2 else 1
        for k in range(count):
            p = vertices[k]
            q = vertices[(k + 1) % len(vertices)]
            shared = sorted(set(p.active_set) & set(q.active_set))
            row = None
            for i in shared:
                lo, hi = _edge_interval(p.point, i - 1, lpp)
                if hi - lo > 1e-9:
                    row = i
                    break
            edges.append({"from": k, "to": (k + 1) % len(vertices), "constraint": row})
    return {
        "supply": [float(v) for v in dms.supply],
        "demand": [float(v) for v in dms.demand],
        "d": lpp.d,
        "constraints": [
            {
                "index": i + 1,
                "lhs": [float(v) for v in lpp.lhs[i]],
                "rhs": float(lpp.rhs[i]),
            }
            for i in range(lpp.lhs.shape[0])
        ],
        "vertices": [
            {
                "point": [float(v) for v in v_.point],
                "active_set": list(v_.active_set),
                "plan": reconstruct_plan(dms, v_.point).x.tolist(),
            }
            for v_ in vertices
        ],
        "edges": edges,
    }


def _estimate_payload(state: EstimateState) -> dict:
    try:
        current = estimate(state).e.tolist()
    except (NoObservations, ZeroSum):
        current = None
    stop = should_stop(state)
    return {
        "steps": state.count,
        "estimate": current,
        "history": estimate_records(state),
        "deltas": [_clean(float(v)) for v in step_deltas(state)],
        "stop": {
            "stop": stop.stop,
            "mean_delta": stop.mean_delta,
            "std_delta": stop.std_delta,
        },
    }


class SessionStore:
    """In-memory registry backed by append-only JSON-lines event files."""

    def __init__(self, data_dir: Path):
        self.data_dir = data_dir
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _path(self, sid: str) -> Path:
        return self.data_dir / f"{sid}.jsonl"

    def _append(self, sid: str, event: dict) -> None:
        with open(self._path(sid), "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event) + "\n")

    def create(self, body: CreateSessionBody) -> Session:
        if body.mode not in MODES:
            _fail(422, "DomainError", f"mode must be one of {MODES}")
        if (body.m - 1) * (body.n - 1) != 2:
            _fail(422, "UnsupportedDimension",
                  "sessions need a planar reduced space; use a 2x3 or 3x2 size")
        sid = uuid.uuid4().hex[:12]
        session = Session(
            id=sid, m=body.m, n=body.n, window=body.window, mode=body.mode,
            state=EstimateState(d=2, window=body.window),
        )
        with self._lock:
            self._sessions[sid] = session
        self._append(sid, {
            "type": "created",
            "m": body.m, "n": body.n,
            "window": body.window, "mode": body.mode,
        })
        return session

    def _rebuild(self, sid: str) -> Session | None:
        path = self._path(sid)
        if not path.exists():
            return None
        session: Session | None = None
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            event = json.loads(line)
            if event["type"] == "created":
                session = Session(
                    id=sid, m=event["m"], n=event["n"],
                    window=event.get("window"), mode=event.get("mode", "learn"),
                    state=EstimateState(d=2, window=event.get("window")),
                )
            elif session is None:
                return None
            elif event["type"] == "situation":
                session.pending = Dms(event["supply"], event["demand"])
            elif event["type"] == "decision":
                if session.pending is None:
                    continue
                obs = make_observation(session.pending, event["point"])
                ingest(session.state, obs)
                session.log.append({
                    "step": session.state.count,
                    "point": event["point"],
                    "source": event.get("source", "human"),
                    "pair": list(obs.pair),
                    "weight": obs.weight,
                })
                session.pending = None
        return session

    def get(self, sid: str) -> Session:
        with self._lock:
            session = self._sessions.get(sid)
            if session is None:
                session = self._rebuild(sid)
                if session is not None:
                    self._sessions[sid] = session
        if session is None:
            _fail(404, "UnknownSession", f"no session {sid!r}")
        return session

    def delete(self, sid: str) -> None:
        session = self.get(sid)
        with self._lock:
            self._sessions.pop(session.id, None)
        self._path(sid).unlink(missing_ok=True)

    def list(self) -> list[Session]:
        with self._lock:
            known = set(self._sessions)
        for path in self.data_dir.glob("*.jsonl"):
            if path.stem not in known:
                self.get(path.stem)
        with self._lock:
            return sorted(self._sessions.values(), key=lambda s: s.id)


def _session_summary(session: Session) -> dict:
    return {
        "id": session.id,
        "m": session.m,
        "n": session.n,
        "window": session.window,
        "mode": session.mode,
        "steps": session.state.count,
        "pending": session.pending is not None,
    }


def create_app(data_dir=None) -> FastAPI:
    """Build the service; events persist under data_dir (or PLANFIT_DATA_DIR)."""
    resolved = Path(
        data_dir
        if data_dir is not None
        else os.environ.get("PLANFIT_DATA_DIR", "planfit_data")
    )
    store = SessionStore(resolved)
    app = FastAPI(title="planfit", version="0.1.0")
    app.state.store = store
    # the browser console is served statically from another origin
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(HTTPException)
    def _http_error(request: Request, exc: HTTPException):
        detail = exc.detail
        if isinstance(detail, dict) and "error" in detail:
            body = detail
        else:
            body = {"error": "HTTPError", "detail": str(detail)}
        return JSONResponse(status_code=exc.status_code, content=body)

    @app.exception_handler(PlanfitError)
    def _domain_error(request: Request, exc: PlanfitError):
        return JSONResponse(
            status_code=422,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    def _ingest_decision(session: Session, point, source: str) -> dict:
        if session.pending is None:
            _fail(409, "NoPendingSituation", "submit a situation before deciding")
        pt = np.asarray(point, dtype=float).ravel()
        try:
            obs = make_observation(session.pending, pt)
        except NotAVertex as exc:
            _fail(422, "NotAVertex", str(exc))
        ingest(session.state, obs)
        record = {
            "step": session.state.count,
            "point": [float(v) for v in pt],
            "source": source,
            "pair": list(obs.pair),
            "weight": obs.weight,
        }
        session.log.append(record)
        session.pending = None
        store._append(session.id, {
            "type": "decision",
            "point": [float(v) for v in pt],
            "source": source,
        })
        try:
            current = estimate(session.state).e.tolist()
        except ZeroSum:
            current = None
        return {
            "step": record["step"],
            "observation": {
                "pair": record["pair"],
                "weight": record["weight"],
                "vector": [float(v) for v in obs.vector],
            },
            "estimate": current,
        }

    def _set_situation(session: Session, dms: Dms) -> dict:
        if session.pending is not None:
            _fail(409, "PendingSituation",
                  "a situation is already pending; decide it first")
        session.pending = dms
        store._append(session.id, {
            "type": "situation",
            "supply": [float(v) for v in dms.supply],
            "demand": [float(v) for v in dms.demand],
        })
        return {"situation": _geometry(dms)}

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        return _session_summary(store.create(body))

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": [_session_summary(s) for s in store.list()]}

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        return _session_summary(store.get(sid))

    @app.delete("/sessions/{sid}")
    def delete_session(sid: str):
        store.delete(sid)
        return {"deleted": sid}

    @app.post("/sessions/{sid}/situation")
    def submit_situation(sid: str, body: SituationBody):
        session = store.get(sid)
        with session.lock:
            dms = Dms(body.supply, body.demand)
            if (dms.m, dms.n) != (session.m, session.n):
                _fail(422, "ShapeError",
                      f"session is {session.m}x{session.n}, "
                      f"situation is {dms.m}x{dms.n}")
            return _set_situation(session, dms)

    @app.post("/sessions/{sid}/situation/generate")
    def generate_situation(sid: str, body: GenerateBody | None = None):
        session = store.get(sid)
        body = body or GenerateBody()
        with session.lock:
            rng = np.random.default_rng(body.seed)
            dms = gen_dms(rng, session.m, session.n, (body.lo, body.hi))
            return _set_situation(session, dms)

    @app.get("/sessions/{sid}/situation")
    def get_situation(sid: str):
        session = store.get(sid)
        if session.pending is None:
            _fail(404, "NoPendingSituation", "no situation is pending")
        return {"situation": _geometry(session.pending)}

    @app.post("/sessions/{sid}/decision")
    def submit_decision(sid: str, body: DecisionBody):
        session = store.get(sid)
        with session.lock:
            return _ingest_decision(session, body.point, "human")

    @app.get("/sessions/{sid}/estimate")
    def get_estimate(sid: str):
        session = store.get(sid)
        return _estimate_payload(session.state)

    @app.get("/sessions/{sid}/decisions")
    def get_decisions(sid: str):
        session = store.get(sid)
        return {"decisions": list(session.log)}

    def _proposal(session: Session) -> tuple[dict, np.ndarray]:
        if session.pending is None:
            _fail(409, "NoPendingSituation", "submit a situation first")
        try:
            current = estimate(session.state)
        except NoObservations as exc:
            _fail(409, "NoObservations", str(exc))
        plan, sol = predict_plan(current, session.pending)
        payload = {
            "vertex": sol.vertex.point.tolist(),
            "plan": plan.x.tolist(),
            "active_pair": list(sol.active_pair) if sol.active_pair else None,
            "estimate": current.e.tolist(),
        }
        return payload, sol.vertex.point

    @app.get("/sessions/{sid}/proposal")
    def get_proposal(sid: str):
        session = store.get(sid)
        with session.lock:
            payload, _ = _proposal(session)
            return payload

    @app.post("/sessions/{sid}/proposal/approve")
    def approve_proposal(sid: str):
        session = store.get(sid)
        with session.lock:
            _, point = _proposal(session)
            return _ingest_decision(session, point, "approved")

    @app.post("/sessions/{sid}/proposal/correct")
    def correct_proposal(sid: str, body: DecisionBody):
        session = store.get(sid)
        with session.lock:
            if session.pending is None:
                _fail(409, "NoPendingSituation", "submit a situation first")
            return _ingest_decision(session, body.point, "corrected")

    return app
