"""Live session transport over a WebSocket.

Each connection owns one session. Incoming frames are stamped at the next
checking-period boundary and fed through the same code path as scripted
traces, so a live session and the equivalent trace produce identical
outgoing frames and session files.

Client frames:  {"type": "start"}
                {"type": "choice", "id": "..."}
                {"type": "teach", "assignment": {...}}
                {"type": "idle_ack"}
Server frames:  session_state, cue, concept_map, practice_result, meters,
                error.
"""

from __future__ import annotations

import asyncio
import queue
import threading

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .errors import PtaError, TraceExhausted, TraceInputMismatch
from .session import PtaSession, SessionConfig, TraceStep


class LiveSource:
    """Input source fed by a WebSocket; stamps frames at checking-period
    boundaries so live input is indistinguishable from a trace."""

    def __init__(self):
        self._q: queue.Queue = queue.Queue()
        self._session: PtaSession | None = None

    def bind(self, session: PtaSession) -> None:
        self._session = session

    def put_frame(self, frame: dict) -> None:
        self._q.put(frame)

    def close(self) -> None:
        self._q.put(None)

    def next_frame(self) -> dict | None:
        return self._q.get()

    def to_step(self, frame: dict) -> TraceStep:
        at = self._session.next_boundary()
        kind = frame.get("type")
        if kind == "choice":
            return TraceStep(at_ms=at, kind="choice", choice_id=frame["id"])
        if kind == "teach":
            return TraceStep(at_ms=at, kind="teach",
                             assignment=dict(frame.get("assignment", {})))
        if kind == "idle_ack":
            return TraceStep(at_ms=at, kind="idle")
        raise TraceInputMismatch(f"unexpected frame type {kind!r}")

    # TraceSource protocol, used by mid-cycle hooks
    def pop(self) -> TraceStep:
        frame = self.next_frame()
        if frame is None:
            raise TraceExhausted("connection closed while awaiting input")
        return self.to_step(frame)

    def peek(self) -> TraceStep | None:
        return None

    def exhausted(self) -> bool:
        return False


def run_live(session: PtaSession, source: LiveSource, outbox: queue.Queue) -> None:
    """Worker loop: apply frames, then process boundaries until the event
    queue drains. Runs in its own thread; blocking input reads happen here."""
    try:
        while True:
            frame = source.next_frame()
            if frame is None:
                break
            try:
                if frame.get("type") == "start":
                    session.push_session_state()
                    continue
                step = source.to_step(frame)
                session.clock.advance_to(max(session.clock.now_ms, step.at_ms))
                session._apply_scene_choice(step)
                session.process_boundary(step.at_ms)
                while session.events.pending:
                    session.process_boundary(session.next_boundary())
            except TraceExhausted:
                break  # connection closed while a cycle awaited input
            except PtaError as exc:
                # reject the frame, keep the connection alive
                outbox.put({"type": "error", "message": str(exc)})
    finally:
        try:
            session.finish()
        except OSError:
            pass
        outbox.put(None)


def create_app(config: SessionConfig) -> FastAPI:
    app = FastAPI()

    @app.websocket("/session")
    async def session_socket(ws: WebSocket) -> None:
        await ws.accept()
        outbox: queue.Queue = queue.Queue()
        source = LiveSource()
        session = PtaSession(config, source, frame_sink=outbox.put)
        source.bind(session)
        worker = threading.Thread(target=run_live, args=(session, source, outbox),
                                  daemon=True)
        worker.start()
        loop = asyncio.get_event_loop()

        async def sender() -> None:
            while True:
                frame = await loop.run_in_executor(None, outbox.get)
                if frame is None:
                    return
                try:
                    await ws.send_json(frame)
                except RuntimeError:
                    return  # socket already closed; drain silently

        send_task = asyncio.ensure_future(sender())
        try:
            while True:
                frame = await ws.receive_json()
                source.put_frame(frame)
        except WebSocketDisconnect:
            pass
        finally:
            source.close()
            await loop.run_in_executor(None, worker.join)
            await send_task

    return app


def serve(config: SessionConfig, host: str = "127.0.0.1", port: int = 8700) -> None:
    import uvicorn

    uvicorn.run(create_app(config), host=host, port=port, log_level="warning")
