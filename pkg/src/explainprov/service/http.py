"""HTTP front end for the Explanation Assistant (stdlib server, one thread per request)."""

from __future__ import annotations

import json
import logging
import re
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, unquote, urlsplit

from ..errors import ConfigurationError, DataError, ExplanationUnavailable, NotFound
from .assistant import ExplanationAssistant, explanation_body

log = logging.getLogger(__name__)

MAX_BODY = 16 * 1024 * 1024

_SEG = r"([^/]+)"
_ROUTES = [
    ("POST", re.compile(rf"^/apps/{_SEG}/decisions/{_SEG}/bindings$"), "post_bindings"),
    ("GET", re.compile(rf"^/apps/{_SEG}/decisions/{_SEG}/provenance$"), "get_provenance"),
    ("GET", re.compile(rf"^/apps/{_SEG}/decisions/{_SEG}/explanations/{_SEG}$"), "get_explanation"),
    ("GET", re.compile(rf"^/apps/{_SEG}/explanations$"), "list_explanations"),
    ("GET", re.compile(r"^/health$"), "health"),
]


def parse_listen(value: str) -> tuple[str, int]:
    """``host:port`` or ``:port``; a missing host means all interfaces."""
    host, sep, port = value.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"listen address must be HOST:PORT, got {value!r}")
    return host or "0.0.0.0", int(port)


def _error_status(exc: Exception) -> tuple[int, str]:
    if isinstance(exc, NotFound):
        return 404, "not_found"
    if isinstance(exc, ExplanationUnavailable):
        return 422, "explanation_unavailable"
    if isinstance(exc, DataError):
        return 400, "data_error"
    if isinstance(exc, ConfigurationError):
        return 500, "configuration_error"
    return 500, "internal_error"


class _Handler(BaseHTTPRequestHandler):
    server: "AssistantServer"
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt: str, *args) -> None:
        log.info("%s %s", self.address_string(), fmt % args)

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        if self.command != "HEAD":
            self.wfile.write(body)

    def _json(self, status: int, payload) -> None:
        self._send(status, json.dumps(payload, ensure_ascii=False).encode("utf-8"), "application/json; charset=utf-8")

    def _dispatch(self, method: str) -> None:
        url = urlsplit(self.path)
        for m, pattern, name in _ROUTES:
            match = pattern.match(url.path)
            if match is None:
                continue
            if m != method:
                self._json(405, {"error": "method_not_allowed", "message": f"{method} not allowed here"})
                return
            args = [unquote(a) for a in match.groups()]
            query = {k: v[-1] for k, v in parse_qs(url.query).items()}
            try:
                getattr(self, name)(*args, query=query)
            except Exception as exc:  # mapped onto the error taxonomy
                status, kind = _error_status(exc)
                if status == 500 and kind == "internal_error":
                    log.exception("unhandled error on %s %s", method, self.path)
                self._json(status, {"error": kind, "message": str(exc)})
            return
        self._json(404, {"error": "not_found", "message": f"no route for {url.path}"})

    def do_GET(self) -> None:
        self._dispatch("GET")

    def do_POST(self) -> None:
        self._dispatch("POST")

    # routes

    def post_bindings(self, app: str, decision: str, *, query) -> None:
        length = int(self.headers.get("Content-Length") or 0)
        if length > MAX_BODY:
            raise DataError("request body too large")
        body = self.rfile.read(length)
        ack = self.server.assistant.post_bindings(app, decision, body)
        self._json(201 if ack["status"] == "created" else 200, ack)

    def get_provenance(self, app: str, decision: str, *, query) -> None:
        text = self.server.assistant.get_provenance(app, decision, query.get("format", "provn"))
        self._send(200, text.encode("utf-8"), "text/provenance-notation; charset=utf-8")

    def get_explanation(self, app: str, decision: str, explanation: str, *, query) -> None:
        if "profile" not in query:
            raise DataError("missing query parameter 'profile'")
        sentences = self.server.assistant.get_explanation(
            app, decision, explanation, query["profile"], query.get("format", "text")
        )
        self._send(200, explanation_body(sentences), "application/json; charset=utf-8")

    def list_explanations(self, app: str, *, query) -> None:
        self._json(200, {"app": app, "explanations": self.server.assistant.list_explanations(app)})

    def health(self, *, query) -> None:
        self._json(200, {"status": "ok", "apps": sorted(self.server.assistant.bundles)})


class AssistantServer(ThreadingHTTPServer):
    daemon_threads = True
    # the stdlib default backlog of 5 resets bursts of concurrent clients
    request_queue_size = 128

    def __init__(self, address: tuple[str, int], assistant: ExplanationAssistant) -> None:
        super().__init__(address, _Handler)
        self.assistant = assistant

    @property
    def url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{'127.0.0.1' if host in ('0.0.0.0', '') else host}:{port}"
