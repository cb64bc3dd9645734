"""HTTP front end for the trial store (the interrogator's network side).

Endpoints (JSON bodies, UTF-8):

    POST /api/trials                 {"count": int, "base_seed": int}
    GET  /api/trials/open?role=human|machine
    GET  /api/trials/{id}            detail; truth only once closed
    GET  /api/trials/{id}/image      PGM P5 bytes
    POST /api/trials/{id}/answers    {"client_id", "role", "text"}
    GET  /api/report                 aggregate metrics

With a ui directory configured, /ui/* serves the dashboard/solver assets.
The underlying store serializes all writes, so concurrent clients are safe.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from ..captcha import generate
from ..errors import RequestError, StoreError
from ..glyphs import default_atlas
from ..imgcore import pgm_encode
from .store import ROLES, TrialStore

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".png": "image/png",
    ".svg": "image/svg+xml",
}


class HarnessServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, store: TrialStore, ui_dir: str | None = None,
                 spec_overrides: dict | None = None):
        self.store = store
        self.ui_dir = Path(ui_dir).resolve() if ui_dir else None
        self.spec_overrides = spec_overrides or {}
        self.atlas = default_atlas()
        super().__init__(address, _Handler)


class _Handler(BaseHTTPRequestHandler):
    server: HarnessServer

    def log_message(self, fmt, *args):  # quiet by default
        pass

    # -- helpers ----------------------------------------------------------

    def _send_json(self, obj, status=200):
        body = json.dumps(obj).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status, message):
        self._send_json({"error": message}, status=status)

    def _read_json_body(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        try:
            obj = json.loads(raw.decode("utf-8")) if raw else {}
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise ValueError("request body is not valid JSON") from None
        if not isinstance(obj, dict):
            raise ValueError("request body must be a JSON object")
        return obj

    # -- routing ----------------------------------------------------------

    def do_GET(self):
        url = urlparse(self.path)
        parts = [p for p in url.path.split("/") if p]
        try:
            if parts == ["api", "report"]:
                return self._get_report()
            if parts == ["api", "trials", "open"]:
                return self._get_open(parse_qs(url.query))
            if len(parts) == 3 and parts[:2] == ["api", "trials"]:
                return self._get_trial(parts[2])
            if len(parts) == 4 and parts[:2] == ["api", "trials"] and parts[3] == "image":
                return self._get_image(parts[2])
            if parts[:1] == ["ui"] and self.server.ui_dir is not None:
                return self._get_static(parts[1:])
            self._send_error_json(404, "no such endpoint")
        except RequestError as exc:
            self._send_error_json(404, str(exc))
        except ValueError as exc:
            self._send_error_json(400, str(exc))

    def do_POST(self):
        url = urlparse(self.path)
        parts = [p for p in url.path.split("/") if p]
        try:
            if parts == ["api", "trials"]:
                return self._post_trials()
            if len(parts) == 4 and parts[:2] == ["api", "trials"] and parts[3] == "answers":
                return self._post_answer(parts[2])
            self._send_error_json(404, "no such endpoint")
        except ValueError as exc:
            self._send_error_json(400, str(exc))

    # -- endpoint bodies ----------------------------------------------------

    def _post_trials(self):
        body = self._read_json_body()
        try:
            count = int(body["count"])
            base_seed = int(body["base_seed"])
        except (KeyError, TypeError):
            raise ValueError("body must carry integer 'count' and 'base_seed'") from None
        trials = self.server.store.create_trials(count, base_seed,
                                                 self.server.spec_overrides)
        self._send_json({"trial_ids": [t.trial_id for t in trials]}, status=201)

    def _post_answer(self, trial_id: str):
        body = self._read_json_body()
        missing = [k for k in ("client_id", "role", "text") if k not in body]
        if missing:
            raise ValueError(f"missing fields: {', '.join(missing)}")
        role = body["role"]
        if role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}")
        try:
            self.server.store.record_answer(trial_id, str(body["client_id"]),
                                            role, str(body["text"]))
        except RequestError as exc:
            msg = str(exc)
            status = 404 if msg.startswith("unknown trial") else 409
            return self._send_error_json(status, msg)
        self._send_json({"accepted": True})

    def _get_open(self, query):
        role = (query.get("role") or [""])[0]
        if role not in ROLES:
            raise ValueError("role query parameter must be human or machine")
        self._send_json({"trial_ids": self.server.store.open_trials(role)})

    def _get_trial(self, trial_id: str):
        self._send_json(self.server.store.trial_detail(trial_id))

    def _get_image(self, trial_id: str):
        trial = self.server.store.get_trial(trial_id)
        body = pgm_encode(generate(trial.spec, self.server.atlas).image)
        self.send_response(200)
        self.send_header("Content-Type", "image/x-portable-graymap")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _get_report(self):
        try:
            report = self.server.store.aggregate_report()
        except StoreError:
            return self._send_json({"n_trials": 0, "per_trial": []})
        self._send_json(report.to_json_dict())

    def _get_static(self, rel_parts: list[str]):
        base = self.server.ui_dir
        rel = "/".join(rel_parts) or "index.html"
        target = (base / rel).resolve()
        if base not in target.parents and target != base:
            return self._send_error_json(404, "not found")
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            return self._send_error_json(404, "not found")
        body = target.read_bytes()
        ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(store: TrialStore, host: str = "127.0.0.1", port: int = 0,
                ui_dir: str | None = None,
                spec_overrides: dict | None = None) -> HarnessServer:
    """Bind a harness server; port 0 picks a free port (see .server_address)."""
    return HarnessServer((host, port), store, ui_dir=ui_dir,
                         spec_overrides=spec_overrides)
