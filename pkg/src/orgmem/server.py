"""Socket adapter: a bidirectional JSON message protocol over WebSocket for
the web client, plus a small HTTP surface.

Protocol messages:
  inbound   {"type": "event", "event": {...ChatEvent...}}
            {"type": "snapshot_request"}
  outbound  {"type": "action", "action": {...Action...}}  (broadcast)
            {"type": "snapshot", "channels": [...], "messages": {...},
             "repo_files": [...], ...}
HTTP: GET /health, GET /stats, GET /repo/file?path=...
"""

from __future__ import annotations

import asyncio

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse, PlainTextResponse

from .gateway import Gateway
from .stats import compute_stats


def snapshot_message(gateway: Gateway) -> dict:
    """View-hydration payload: channels, conversation history, repo files."""
    ws = gateway.ws
    channels = set(ws.state.conversation_log)
    if ws.config.qa_channel:
        channels.add(ws.config.qa_channel)
    return {
        "type": "snapshot",
        "channels": sorted(channels),
        "messages": ws.state.conversation_log,
        "repo_files": [
            {"path": path, "body": ws.store.snapshot.body(path)}
            for path in ws.store.snapshot.paths()
        ],
        "roster": [
            {"id": e.user_id, "name": e.display_name, "role": e.role}
            for e in ws.roster.entries.values()
        ],
        "qa_channel": ws.config.qa_channel,
        "bot_id": ws.config.bot_id,
        "bot_handle": ws.config.bot_handle,
        "group_members": ws.state.group_members,
        "revision": ws.store.snapshot.revision,
    }


def make_app(gateway: Gateway) -> FastAPI:
    app = FastAPI(title="orgmem gateway")
    clients: set[WebSocket] = set()
    ingest_lock = asyncio.Lock()

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "revision": gateway.ws.store.snapshot.revision}

    @app.get("/stats")
    def stats() -> JSONResponse:
        return JSONResponse(compute_stats(gateway.ws.audit.records).to_json())

    @app.get("/repo/file")
    def repo_file(path: str) -> PlainTextResponse:
        snapshot = gateway.ws.store.snapshot
        if path not in snapshot.files:
            return PlainTextResponse(f"no such file: {path}", status_code=404)
        return PlainTextResponse(snapshot.body(path), media_type="text/markdown")

    async def broadcast(message: dict) -> None:
        dead = []
        for client in clients:
            try:
                await client.send_json(message)
            except Exception:
                dead.append(client)
        for client in dead:
            clients.discard(client)

    @app.websocket("/ws")
    async def socket(websocket: WebSocket) -> None:
        await websocket.accept()
        clients.add(websocket)
        try:
            while True:
                message = await websocket.receive_json()
                mtype = message.get("type")
                if mtype == "snapshot_request":
                    await websocket.send_json(snapshot_message(gateway))
                elif mtype == "event":
                    async with ingest_lock:
                        actions = gateway.ingest_json(message.get("event", {}))
                    for action in actions:
                        await broadcast({"type": "action", "action": action.to_json()})
                else:
                    await websocket.send_json(
                        {"type": "error", "error": f"unknown message type {mtype!r}"}
                    )
        except WebSocketDisconnect:
            pass
        finally:
            clients.discard(websocket)

    return app


def serve(gateway: Gateway, host: str = "127.0.0.1", port: int = 8777) -> None:
    """Run the socket/HTTP adapter until interrupted."""
    import uvicorn

    uvicorn.run(make_app(gateway), host=host, port=port, log_level="warning")
