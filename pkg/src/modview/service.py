"""Session-oriented HTTP API over the pipeline.

All endpoints live under /v1.  Uploads are multipart/form-data with fields
``edges`` (edge-list text, required), ``attributes`` (attribute table text,
optional) and ``params`` (JSON object of PipelineParams fields, optional);
the body is parsed with the stdlib email machinery, so the service has no
form-parsing dependency.  Pipeline construction runs on a background thread
and is polled via the status endpoint.  Responses that tests pin byte-for-
byte are serialized with the canonical JSON writer from the documents
module rather than the framework's default encoder.
"""

from __future__ import annotations

import json
from email import policy
from email.parser import BytesParser

from fastapi import FastAPI, Request, Response

from .documents import (
    DocumentError,
    dumps,
    hierarchy_document,
    svg_document,
    view_document,
)
from .graph import GraphError, load_attributes, load_edge_list
from .modularity import partition_to_tsv
from .session import PipelineParams, SessionError, SessionStore, prepare_graph
from .stats import StatsError

EXPORT_FORMATS = ("svg", "view-json", "hierarchy-json", "partition-tsv")

_MOVE_CONFLICTS = {
    "no significant substructure",
    "at significance boundary",
    "children not in view",
    "not in view",
    "nothing to undo",
    "building",
    "build failed",
}


def _error(status: int, reason: str, detail: str = "") -> Response:
    doc = {"error": {"reason": reason, "detail": detail or reason}}
    return Response(dumps(doc), status_code=status, media_type="application/json")


def _json(doc, status: int = 200) -> Response:
    return Response(dumps(doc), status_code=status, media_type="application/json")


def parse_multipart(content_type: str, body: bytes) -> dict:
    """Multipart/form-data fields as {name: bytes} via the email parser."""
    if "multipart/form-data" not in (content_type or ""):
        raise GraphError("expected a multipart/form-data body")
    head = f"Content-Type: {content_type}\r\nMIME-Version: 1.0\r\n\r\n".encode()
    msg = BytesParser(policy=policy.default).parsebytes(head + body)
    if not msg.is_multipart():
        raise GraphError("malformed multipart body")
    fields = {}
    for part in msg.iter_parts():
        name = part.get_param("name", header="content-disposition")
        if name:
            fields[name] = part.get_payload(decode=True) or b""
    return fields


def _params_from_json(raw: bytes | None) -> PipelineParams:
    if not raw:
        return PipelineParams()
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise GraphError(f"params field is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise GraphError("params must be a JSON object")
    allowed = set(PipelineParams.__dataclass_fields__)
    unknown = set(data) - allowed
    if unknown:
        raise GraphError(f"unknown params: {sorted(unknown)}")
    try:
        return PipelineParams(**data)
    except TypeError as exc:
        raise GraphError(f"bad params: {exc}") from exc


def create_app(store: SessionStore | None = None) -> FastAPI:
    app = FastAPI(title="modview", version="0.1.0")
    app.state.store = store or SessionStore()

    def get_session(session_id: str):
        return app.state.store.get(session_id)

    @app.exception_handler(SessionError)
    async def _session_error(_request, exc: SessionError):
        if exc.reason == "unknown session":
            return _error(404, exc.reason, exc.detail)
        if exc.reason in _MOVE_CONFLICTS:
            return _error(409, exc.reason, exc.detail)
        return _error(400, exc.reason, exc.detail)

    @app.exception_handler(GraphError)
    async def _graph_error(_request, exc: GraphError):
        return _error(400, "invalid input", str(exc))

    @app.exception_handler(StatsError)
    async def _stats_error(_request, exc: StatsError):
        return _error(400, "invalid stat request", str(exc))

    @app.exception_handler(DocumentError)
    async def _document_error(_request, exc: DocumentError):
        return _error(400, "invalid stat request", str(exc))

    @app.post("/v1/sessions")
    async def create_session(request: Request):
        body = await request.body()
        fields = parse_multipart(request.headers.get("content-type", ""), body)
        if "edges" not in fields:
            raise GraphError("missing required field 'edges'")
        graph = load_edge_list(fields["edges"].decode("utf-8"))
        if "attributes" in fields:
            graph = load_attributes(graph, fields["attributes"].decode("utf-8"))
        params = _params_from_json(fields.get("params"))
        graph = prepare_graph(graph, params)
        session = app.state.store.create(graph, params)
        return _json({"id": session.id, "status": session.state}, status=201)

    @app.get("/v1/sessions/{session_id}/status")
    async def status(session_id: str):
        return _json(get_session(session_id).summary())

    def _view_doc(session, stat=None, mode="p", category=None):
        stats = session.stats_for(stat) if stat else None
        return view_document(
            session.tree,
            session.view,
            session.layout,
            session.quotient(),
            stats=stats,
            mode=mode,
            category=category,
        )

    @app.get("/v1/sessions/{session_id}/view")
    async def get_view(
        session_id: str,
        stat: str | None = None,
        mode: str = "p",
        category: str | None = None,
    ):
        session = get_session(session_id)
        with session.lock:
            session._require_ready()
            return _json(_view_doc(session, stat, mode, category))

    async def _move_payload(request: Request, key: str) -> int:
        try:
            data = await request.json()
        except json.JSONDecodeError as exc:
            raise GraphError(f"body is not valid JSON: {exc}") from exc
        if not isinstance(data, dict) or key not in data:
            raise GraphError(f"body must be a JSON object with a {key!r} field")
        value = data[key]
        if not isinstance(value, int) or isinstance(value, bool):
            raise GraphError(f"{key!r} must be an integer cluster id")
        return value

    @app.post("/v1/sessions/{session_id}/refine")
    async def refine(session_id: str, request: Request):
        session = get_session(session_id)
        cluster = await _move_payload(request, "cluster")
        session.refine(cluster)
        with session.lock:
            return _json(_view_doc(session))

    @app.post("/v1/sessions/{session_id}/coarsen")
    async def coarsen(session_id: str, request: Request):
        session = get_session(session_id)
        target = await _move_payload(request, "target")
        session.coarsen(target)
        with session.lock:
            return _json(_view_doc(session))

    @app.post("/v1/sessions/{session_id}/undo")
    async def undo(session_id: str):
        session = get_session(session_id)
        session.undo()
        with session.lock:
            return _json(_view_doc(session))

    @app.get("/v1/sessions/{session_id}/hierarchy")
    async def hierarchy(session_id: str):
        session = get_session(session_id)
        with session.lock:
            session._require_ready()
            return _json(hierarchy_document(session.tree))

    @app.get("/v1/sessions/{session_id}/export")
    async def export(session_id: str, format: str = "view-json"):
        session = get_session(session_id)
        with session.lock:
            session._require_ready()
            if format == "view-json":
                return _json(_view_doc(session))
            if format == "hierarchy-json":
                return _json(hierarchy_document(session.tree))
            if format == "svg":
                return Response(
                    svg_document(_view_doc(session)), media_type="image/svg+xml"
                )
            if format == "partition-tsv":
                return Response(
                    partition_to_tsv(session.graph, session.view.induced_partition),
                    media_type="text/tab-separated-values",
                )
        return _error(400, "unknown format", f"format must be one of {EXPORT_FORMATS}")

    return app


app = create_app()
