"""Broadcast hub and WebSocket endpoint.

Every client gets a bounded send queue (64 messages): feature and frame
messages are droppable (oldest first) so a stalled client can never hold
up the producer, while authoring status, script lists, and diagnostics
are never dropped.  The hub owns no script state; commands are forwarded
to a SessionControl, which answers from the registry and scheduler.

Keepalive: serve runs uvicorn with ws ping/pong every 15 s.
"""

from __future__ import annotations

import asyncio
import itertools
from collections import deque
from typing import Optional, Protocol

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles

from sonoviz.hub.wire import (
    CLIENT_TYPES,
    ProtocolError,
    author_status_message,
    decode_message,
    diagnostics_message,
    encode_message,
    protocol_error_message,
    script_list_message,
)

QUEUE_CAPACITY = 64
DROPPABLE_TYPES = ("features", "frame")
PING_INTERVAL_S = 15.0

_FALLBACK_PAGE = """<!doctype html>
<html><head><title>sonoviz</title></head>
<body><h1>sonoviz engine</h1>
<p>The WebSocket endpoint is at <code>/stream</code>.
Build the frontend (see README) to get the authoring console here.</p>
</body></html>
"""


class SessionControl(Protocol):
    """What the hub needs from the orchestrator."""

    def start_authoring(self, prompt: str) -> bool: ...

    def set_draw_ui(self, title: str, value: bool) -> bool: ...

    def list_records(self) -> list: ...


class ClientSession:
    """One connected client: subscriptions plus a bounded send queue."""

    def __init__(self, client_id: int, subscriptions: Optional[set[str]] = None):
        self.id = client_id
        self.subscriptions = subscriptions or {"features", "frames"}
        self.drops = 0
        self._queue: deque[tuple[str, bool]] = deque()
        self._wakeup = asyncio.Event()
        self.closed = False

    def wants(self, msg_type: str) -> bool:
        if msg_type == "features":
            return "features" in self.subscriptions
        if msg_type == "frame":
            return "frames" in self.subscriptions
        return True

    def enqueue(self, payload: str, droppable: bool) -> None:
        if self.closed:
            return
        if len(self._queue) >= QUEUE_CAPACITY:
            evicted = False
            for i, (_, entry_droppable) in enumerate(self._queue):
                if entry_droppable:
                    del self._queue[i]
                    self.drops += 1
                    evicted = True
                    break
            if not evicted:
                if droppable:
                    self.drops += 1  # nothing evictable: lose the new one
                    return
                # control messages always get through, even past the bound
        self._queue.append((payload, droppable))
        self._wakeup.set()

    async def get(self) -> str:
        while True:
            if self._queue:
                return self._queue.popleft()[0]
            self._wakeup.clear()
            await self._wakeup.wait()

    def pending(self) -> int:
        return len(self._queue)


class StreamHub:
    """Fan-out of wire messages to every subscribed client."""

    def __init__(self, control: Optional[SessionControl] = None):
        self.control = control
        self.clients: dict[int, ClientSession] = {}
        self._ids = itertools.count(1)

    def register(self, subscriptions: Optional[set[str]] = None) -> ClientSession:
        client = ClientSession(next(self._ids), subscriptions)
        self.clients[client.id] = client
        return client

    def unregister(self, client: ClientSession) -> None:
        client.closed = True
        self.clients.pop(client.id, None)

    def broadcast(self, msg: dict) -> None:
        """Encode once, enqueue to every subscribed client with the drop
        policy: features/frames may be dropped, everything else may not."""
        if not self.clients:
            return
        payload = encode_message(msg)
        droppable = msg["type"] in DROPPABLE_TYPES
        for client in list(self.clients.values()):
            if client.wants(msg["type"]):
                client.enqueue(payload, droppable)

    def send(self, client: ClientSession, msg: dict) -> None:
        client.enqueue(encode_message(msg), droppable=False)

    def handle_command(self, client: ClientSession, msg: dict) -> None:
        """React to one decoded client message."""
        if self.control is None:
            self.send(client, protocol_error_message("engine not ready"))
            return
        type_ = msg["type"]
        if type_ == "author":
            if not self.control.start_authoring(msg["prompt"]):
                self.send(client, author_status_message("failed", "busy"))
        elif type_ == "set_draw_ui":
            if not self.control.set_draw_ui(msg["title"], msg["value"]):
                self.send(
                    client,
                    diagnostics_message(
                        [
                            {
                                "severity": "error",
                                "code": "E_UNKNOWN_TITLE",
                                "line": 1,
                                "col": 1,
                                "message": f"no script titled {msg['title']!r}",
                            }
                        ],
                        title=msg["title"],
                    ),
                )
        elif type_ == "list_scripts":
            self.send(client, script_list_message(self.control.list_records()))
        else:
            self.send(client, protocol_error_message(f"unexpected message type {type_!r}"))


def create_app(hub: StreamHub, static_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="sonoviz")

    @app.websocket("/stream")
    async def stream(ws: WebSocket):
        await ws.accept()
        subs_param = ws.query_params.get("subscribe")
        subs = set(subs_param.split(",")) & {"features", "frames"} if subs_param else None
        client = hub.register(subs)

        async def pump():
            while True:
                payload = await client.get()
                await ws.send_text(payload)

        sender = asyncio.create_task(pump())
        try:
            while True:
                text = await ws.receive_text()
                try:
                    msg = decode_message(text)
                except ProtocolError as exc:
                    hub.send(client, protocol_error_message(str(exc)))
                    continue
                if msg["type"] not in CLIENT_TYPES:
                    hub.send(
                        client,
                        protocol_error_message(
                            f"clients may not send {msg['type']!r} messages"
                        ),
                    )
                    continue
                hub.handle_command(client, msg)
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            hub.unregister(client)

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    else:

        @app.get("/")
        async def index() -> HTMLResponse:
            return HTMLResponse(_FALLBACK_PAGE)

    return app
