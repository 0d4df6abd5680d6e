"""HTTP facade over scenes and assembly sessions.

One service process serves one scene directory. All state changes
travel through ordered event batches; every accepted batch is appended
to the session's log file before it is acknowledged, so killing and
restarting the process reconstructs every session byte-for-byte by
replay. See PROTOCOL.md at the repository root for the wire format.

Concurrency: sessions are independent; a per-session lock serializes
event application (single writer), and scene data is immutable after
startup.
"""
from __future__ import annotations

import json
import os
import threading
import time
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware

from .errors import (
    MalformedEventError,
    MeshQcError,
    OutOfOrderEventError,
    SessionEndedError,
    UnknownPartError,
)
from .meshio import STL_BINARY, load_mesh, write_mesh
from .scene import LoadedScene, load_scene_dir
from .session import (
    AssemblySession,
    event_from_record,
    event_to_record,
    session_parts_record,
    session_report_record,
)


class SessionRuntime:
    """One live session plus its persistence bookkeeping."""

    def __init__(self, session_id: str, session: AssemblySession, log_path: Path,
                 created_unix_ms: int, last_seq: int = 0):
        self.session_id = session_id
        self.session = session
        self.log_path = log_path
        self.created_unix_ms = created_unix_ms
        self.last_seq = last_seq
        self.lock = threading.Lock()


class ServiceState:
    def __init__(self, loaded: LoadedScene):
        self.loaded = loaded
        self.scene = loaded.scene
        # assets are served as binary STL no matter how they are stored
        self.asset_stl: dict[str, bytes] = {
            name: write_mesh(load_mesh(path), STL_BINARY)
            for name, path in loaded.asset_paths.items()
        }
        self.sessions: dict[str, SessionRuntime] = {}
        self.lock = threading.Lock()
        self._restore_sessions()

    def _restore_sessions(self):
        logs_dir = self.loaded.logs_dir
        if not logs_dir.is_dir():
            return
        for log_path in sorted(logs_dir.glob("*.jsonl")):
            session_id = log_path.stem
            events, last_seq = _load_log(log_path)
            session = AssemblySession(self.scene)
            for event in events:
                session.apply(event)
            created = 0
            meta_path = log_path.with_suffix(".meta.json")
            if meta_path.is_file():
                meta = json.loads(meta_path.read_text("utf-8"))
                created = int(meta.get("created_unix_ms", 0))
            self.sessions[session_id] = SessionRuntime(
                session_id, session, log_path, created, last_seq
            )

    def new_session(self) -> SessionRuntime:
        logs_dir = self.loaded.logs_dir
        logs_dir.mkdir(parents=True, exist_ok=True)
        with self.lock:
            while True:
                session_id = uuid.uuid4().hex[:12]
                if session_id not in self.sessions:
                    break
            created = int(time.time() * 1000)
            log_path = logs_dir / f"{session_id}.jsonl"
            log_path.touch()
            meta = {
                "session_id": session_id,
                "scene_id": self.scene.scene_id,
                "created_unix_ms": created,
            }
            log_path.with_suffix(".meta.json").write_text(
                json.dumps(meta, separators=(",", ":")) + "\n", "utf-8"
            )
            runtime = SessionRuntime(session_id, AssemblySession(self.scene), log_path, created)
            self.sessions[session_id] = runtime
            return runtime

    def runtime(self, session_id: str) -> SessionRuntime:
        runtime = self.sessions.get(session_id)
        if runtime is None:
            raise HTTPException(404, f"unknown session {session_id!r}")
        return runtime


def _load_log(path: Path) -> tuple[list, int]:
    """Events plus the highest batch sequence number present in a log file."""
    events = []
    last_seq = 0
    for lineno, line in enumerate(path.read_text("utf-8").splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
            events.append(event_from_record(record))
        except (ValueError, MalformedEventError) as exc:
            raise MeshQcError(f"{path} line {lineno}: {exc}") from None
        seq = record.get("seq")
        if isinstance(seq, int):
            last_seq = max(last_seq, seq)
    return events, last_seq


def _json(payload, status: int = 200) -> Response:
    # fixed separators keep report bytes identical across restarts
    return Response(
        content=json.dumps(payload, separators=(",", ":")) + "\n",
        status_code=status,
        media_type="application/json",
    )


def create_app(scene_dir: str | Path) -> FastAPI:
    """Build the service for one scene directory (raises InvalidSceneError)."""
    state = ServiceState(load_scene_dir(scene_dir))
    app = FastAPI(title="meshqc session service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.meshqc = state

    @app.post("/sessions")
    def create_session(body: dict):
        scene_id = body.get("scene_id")
        if not isinstance(scene_id, str):
            raise HTTPException(400, "body must carry scene_id")
        if scene_id != state.scene.scene_id:
            raise HTTPException(404, f"unknown scene {scene_id!r}")
        runtime = state.new_session()
        return _json({"session_id": runtime.session_id, "scene_id": scene_id})

    @app.get("/scene/{scene_id}")
    def fetch_scene(scene_id: str):
        if scene_id != state.scene.scene_id:
            raise HTTPException(404, f"unknown scene {scene_id!r}")
        return _json(state.loaded.manifest)

    @app.get("/assets/{name}")
    def fetch_asset(name: str):
        data = state.asset_stl.get(name)
        if data is None:
            raise HTTPException(404, f"unknown asset {name!r}")
        return Response(content=data, media_type="model/stl")

    @app.post("/sessions/{session_id}/events")
    def post_events(session_id: str, body: dict):
        runtime = state.runtime(session_id)
        seq = body.get("seq")
        if not isinstance(seq, int) or isinstance(seq, bool) or seq < 1:
            raise HTTPException(400, "seq must be a positive integer")
        raw_events = body.get("events")
        if not isinstance(raw_events, list) or not raw_events:
            raise HTTPException(400, "events must be a non-empty array")
        try:
            events = [event_from_record(r) for r in raw_events]
        except MalformedEventError as exc:
            raise HTTPException(400, str(exc))

        with runtime.lock:
            if seq <= runtime.last_seq:
                raise HTTPException(
                    409, f"batch seq {seq} already applied (last seq {runtime.last_seq})"
                )
            # apply against a copy: a failing batch must leave no trace
            trial = runtime.session.clone()
            results = []
            try:
                for event in events:
                    results.append(trial.apply(event))
            except (OutOfOrderEventError, SessionEndedError) as exc:
                raise HTTPException(409, str(exc))
            except UnknownPartError as exc:
                raise HTTPException(404, str(exc))

            lines = "".join(
                json.dumps(event_to_record(e, seq), separators=(",", ":")) + "\n"
                for e in events
            )
            with open(runtime.log_path, "a", encoding="utf-8") as fh:
                fh.write(lines)
                fh.flush()
                os.fsync(fh.fileno())
            runtime.session = trial
            runtime.last_seq = seq

        return _json(
            {
                "seq": seq,
                "outcomes": [
                    r.outcome.to_record() if r.outcome is not None else None for r in results
                ],
                "warnings": [r.warning for r in results],
                "status": "ended" if trial.ended else "active",
                "parts": session_parts_record(trial),
            }
        )

    @app.get("/sessions/{session_id}/state")
    def fetch_state(session_id: str):
        runtime = state.runtime(session_id)
        with runtime.lock:
            session = runtime.session
            return _json(
                {
                    "session_id": session_id,
                    "scene_id": session.scene.scene_id,
                    "status": "ended" if session.ended else "active",
                    "clock_ms": session.clock_ms,
                    "last_seq": runtime.last_seq,
                    "parts": session_parts_record(session),
                }
            )

    @app.get("/sessions/{session_id}/report")
    def fetch_report(session_id: str):
        runtime = state.runtime(session_id)
        with runtime.lock:
            return _json(session_report_record(runtime.session, session_id))

    @app.get("/sessions")
    def list_sessions():
        with state.lock:
            runtimes = sorted(
                state.sessions.values(), key=lambda r: (r.created_unix_ms, r.session_id)
            )
        entries = []
        for runtime in runtimes:
            session = runtime.session
            entries.append(
                {
                    "session_id": runtime.session_id,
                    "scene_id": session.scene.scene_id,
                    "status": "ended" if session.ended else "active",
                    "created_unix_ms": runtime.created_unix_ms,
                    "event_count": len(session.events),
                    "grade": session.grade().grade if session.ended else None,
                }
            )
        return _json({"sessions": entries})

    return app


def serve(scene_dir: str | Path, host: str = "127.0.0.1", port: int = 8000) -> None:
    """Run the service until interrupted."""
    import uvicorn

    app = create_app(scene_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
