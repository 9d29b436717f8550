"""Session-oriented HTTP/WebSocket API around the pipeline.

Each session owns a scene and a chat history. Within a session, utterances
are strictly serialized behind an asyncio lock; across sessions everything
runs in parallel. Pipeline stage events fan out to any number of WebSocket
subscribers; a subscriber that cannot keep up is dropped rather than letting
its backlog grow without bound.
"""

from __future__ import annotations

import asyncio
import logging
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .errors import MolVoiceError, QueueFullError, SessionNotFoundError
from .gateway import GatewayConfig
from .pdbio import write_pdb
from .pipeline import CommandSession
from .scene import SceneState

log = logging.getLogger(__name__)

MAX_PENDING = 16         # in-flight + queued utterances per session
EVENT_QUEUE_SIZE = 256   # per-subscriber buffered events before drop

_DROPPED = object()      # queue sentinel telling the WS loop it fell behind

_ERROR_STATUS = {
    "session_not_found": 404,
    "queue_full": 429,
    "empty_utterance": 400,
    "malformed_record": 400,
    "no_atoms": 400,
    "malformed_line": 400,
}


class UtterancePayload(BaseModel):
    text: str


@dataclass
class _Runtime:
    """Per-session mutable service state, touched only on the event loop."""

    session: CommandSession
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    pending: int = 0
    subscribers: list[asyncio.Queue] = field(default_factory=list)


def scene_snapshot(scene: SceneState) -> dict:
    """The documented scene document: counts, sim/view state, rep summary
    grouped by (chain, resname)."""
    groups: dict[tuple[str, int], dict] = {}
    for index, atom in enumerate(scene.structure.atoms):
        rep = scene.rep.records[index]
        key = (atom.chain, atom.resname)
        bucket = groups.setdefault(key, {"count": 0, "colors": set(), "spacefill": set(), "sticks": set()})
        bucket["count"] += 1
        bucket["colors"].add(rep.color.value)
        bucket["spacefill"].add(rep.spacefill)
        bucket["sticks"].add(rep.sticks)
    summary = [
        {
            "chain": chain,
            "resname": resname,
            "atomCount": bucket["count"],
            "colors": sorted(bucket["colors"]),
            "spacefillRadii": sorted(bucket["spacefill"]),
            "sticksRadii": sorted(bucket["sticks"]),
        }
        for (chain, resname), bucket in sorted(groups.items())
    ]
    return {
        "atomCount": len(scene.structure.atoms),
        "title": scene.structure.title,
        "sim": {
            "temperature": scene.sim.temperature,
            "updateRate": scene.sim.update_rate,
            "running": scene.sim.running,
        },
        "view": {"zoomFactor": scene.view.zoom_factor},
        "selectionSize": len(scene.current_selection),
        "repSummary": summary,
    }


def create_app(
    config: GatewayConfig | None = None,
    transport=None,
    clock=None,
) -> FastAPI:
    """Build the service; config/transport/clock flow into every session."""
    app = FastAPI(title="molvoice", docs_url=None, redoc_url=None)
    # the browser companion may be served from another origin; nothing here
    # is credentialed, keys stay server-side
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])
    sessions: dict[str, _Runtime] = {}
    app.state.sessions = sessions

    def runtime_for(session_id: str) -> _Runtime:
        runtime = sessions.get(session_id)
        if runtime is None:
            raise SessionNotFoundError(f"no session {session_id}")
        return runtime

    @app.exception_handler(MolVoiceError)
    async def molvoice_error(request: Request, err: MolVoiceError) -> JSONResponse:
        status = _ERROR_STATUS.get(err.code, 500)
        return JSONResponse(status_code=status, content=err.as_doc())

    @app.exception_handler(RequestValidationError)
    async def bad_request(request: Request, err: RequestValidationError) -> JSONResponse:
        detail = {"errors": [str(e.get("msg", "")) for e in err.errors()][:5]}
        return JSONResponse(
            status_code=400,
            content={"code": "bad_request", "message": "invalid request body", "detail": detail},
        )

    @app.post("/sessions")
    async def create_session(request: Request) -> dict:
        body = (await request.body()).decode("utf-8", errors="replace")
        pdb_text = body if body.strip() else None
        session = CommandSession(
            config=config, pdb_text=pdb_text, transport=transport, clock=clock
        )
        session_id = uuid.uuid4().hex[:12]
        sessions[session_id] = _Runtime(session=session)
        log.info("session %s created, %d atoms", session_id, len(session.scene.structure.atoms))
        return {"id": session_id}

    @app.post("/sessions/{session_id}/utterance")
    async def utterance(session_id: str, payload: UtterancePayload) -> dict:
        runtime = runtime_for(session_id)
        if runtime.pending >= MAX_PENDING:
            raise QueueFullError(f"session {session_id} has {runtime.pending} pending utterances")
        runtime.pending += 1
        loop = asyncio.get_running_loop()

        def emit(stage: str, data: dict) -> None:
            # pipeline runs off-loop; hop back so fan-out stays single-threaded
            loop.call_soon_threadsafe(_fanout, runtime, stage, data)

        try:
            async with runtime.lock:
                result = await asyncio.to_thread(runtime.session.run, payload.text, emit)
        finally:
            runtime.pending -= 1
        return result.to_doc()

    @app.get("/sessions/{session_id}/scene")
    async def get_scene(session_id: str) -> dict:
        return scene_snapshot(runtime_for(session_id).session.scene)

    @app.get("/sessions/{session_id}/pdb")
    async def get_pdb(session_id: str) -> PlainTextResponse:
        text = write_pdb(runtime_for(session_id).session.scene)
        return PlainTextResponse(text)

    @app.websocket("/sessions/{session_id}/events")
    async def events(websocket: WebSocket, session_id: str) -> None:
        runtime = sessions.get(session_id)
        if runtime is None:
            await websocket.close(code=4404)
            return
        await websocket.accept()
        queue: asyncio.Queue = asyncio.Queue(maxsize=EVENT_QUEUE_SIZE)
        runtime.subscribers.append(queue)
        try:
            while True:
                item = await queue.get()
                if item is _DROPPED:
                    await websocket.close(code=4408)
                    break
                await websocket.send_json(item)
        except WebSocketDisconnect:
            pass
        finally:
            if queue in runtime.subscribers:
                runtime.subscribers.remove(queue)

    return app


def _fanout(runtime: _Runtime, stage: str, data: dict) -> None:
    doc = {"stage": stage, "payload": data}
    for queue in list(runtime.subscribers):
        try:
            queue.put_nowait(doc)
        except asyncio.QueueFull:
            # slow consumer: stop feeding it and let its loop close the socket
            runtime.subscribers.remove(queue)
            try:
                queue.get_nowait()
            except asyncio.QueueEmpty:
                pass
            queue.put_nowait(_DROPPED)
            log.warning("dropped a slow event subscriber")
