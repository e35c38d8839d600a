"""JSON-over-HTTP front end for a live engine.

One engine, one writer: commits are serialized behind a lock; conversions and
stats read the same state under it (requests are short, the engine is fast).
Every response carries a schema version field. 400 means a malformed request,
422 means well-formed input the engine cannot convert or align.
"""
from __future__ import annotations

import json
import mimetypes
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .decoder import NoPathError, UnconvertibleInputError
from .engine import OnlineEngine
from .evaluate import topk_score
from .learner import ObservationError
from .pinyin import SegmentationError

API_VERSION = 1


class EngineService:
    def __init__(self, engine: OnlineEngine, snapshot_dir: str | None = None, ui_dir: str | None = None):
        self.engine = engine
        self.snapshot_dir = snapshot_dir
        self.ui_dir = ui_dir
        self.lock = threading.Lock()
        self.commits = 0
        self.top1_sum = 0.0
        self.recent_top1: list[float] = []

    # ---- endpoint bodies; each returns (status, payload dict) ----

    def convert(self, payload: dict) -> tuple[int, dict]:
        pinyin = payload.get("pinyin")
        k = payload.get("k", self.engine.config.k)
        if not isinstance(pinyin, str) or not pinyin or not isinstance(k, int) or k < 1:
            return 400, {"v": API_VERSION, "error": "expected {'pinyin': str, 'k': int>=1}"}
        with self.lock:
            try:
                syllables = self.engine.segment(pinyin)
                if not syllables:
                    return 400, {"v": API_VERSION, "error": "empty pinyin"}
                result = self.engine.convert(syllables, k)
            except (SegmentationError, UnconvertibleInputError, NoPathError) as exc:
                return 422, {"v": API_VERSION, "error": str(exc)}
        return 200, {
            "v": API_VERSION,
            "syllables": syllables,
            "candidates": [{"text": t, "score": s} for t, s in result.candidates],
        }

    def commit(self, payload: dict) -> tuple[int, dict]:
        pinyin = payload.get("pinyin")
        text = payload.get("text")
        if not isinstance(pinyin, str) or not isinstance(text, str) or not pinyin or not text:
            return 400, {"v": API_VERSION, "error": "expected {'pinyin': str, 'text': str}"}
        with self.lock:
            try:
                syllables = self.engine.segment(pinyin)
                pre = self.engine.convert(syllables, 1) if syllables else None
            except (SegmentationError, UnconvertibleInputError, NoPathError):
                pre = None
            try:
                self.engine.commit(text, pinyin)
            except ObservationError as exc:
                return 422, {"v": API_VERSION, "error": str(exc)}
            top1 = topk_score(pre, text, 1) if pre is not None else 0.0
            self.commits += 1
            self.top1_sum += top1
            self.recent_top1.append(round(top1, 6))
            del self.recent_top1[:-50]
            if self.snapshot_dir and self.commits % self.engine.config.per == 0:
                self.engine.save_snapshot(self.snapshot_dir)
            n = self.engine.n_updates
        return 200, {"v": API_VERSION, "ok": True, "n": n, "session": self.session_stats()}

    def stats(self, top: int) -> tuple[int, dict]:
        if top < 1:
            return 400, {"v": API_VERSION, "error": "top must be >= 1"}
        with self.lock:
            words = self.engine.top_words(top)
            return 200, {
                "v": API_VERSION,
                "top": [[t, w] for t, w in words],
                "vocab_size": self.engine.vocab.size,
                "updates": self.engine.n_updates,
                "session": self.session_stats(),
            }

    def reset(self) -> tuple[int, dict]:
        with self.lock:
            self.engine.reset()
            self.commits = 0
            self.top1_sum = 0.0
            self.recent_top1 = []
        return 200, {"v": API_VERSION, "ok": True}

    def session_stats(self) -> dict:
        mean = self.top1_sum / self.commits if self.commits else 0.0
        return {
            "commits": self.commits,
            "top1_mean": round(mean, 6),
            "recent_top1": list(self.recent_top1),
        }

    def save(self) -> None:
        if self.snapshot_dir:
            with self.lock:
                self.engine.save_snapshot(self.snapshot_dir)


def make_handler(service: EngineService):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send(self, status: int, payload: dict) -> None:
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _read_json(self) -> dict | None:
            try:
                length = int(self.headers.get("Content-Length", "0"))
                raw = self.rfile.read(length) if length else b""
                payload = json.loads(raw.decode("utf-8")) if raw else {}
            except (ValueError, UnicodeDecodeError):
                return None
            return payload if isinstance(payload, dict) else None

        def do_OPTIONS(self):
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_POST(self):
            payload = self._read_json()
            if payload is None:
                self._send(400, {"v": API_VERSION, "error": "malformed JSON body"})
                return
            if self.path == "/convert":
                self._send(*service.convert(payload))
            elif self.path == "/commit":
                self._send(*service.commit(payload))
            elif self.path == "/reset":
                self._send(*service.reset())
            else:
                self._send(404, {"v": API_VERSION, "error": f"unknown endpoint {self.path}"})

        def do_GET(self):
            path, _, query = self.path.partition("?")
            if path == "/stats":
                top = 10
                for part in query.split("&"):
                    if part.startswith("top="):
                        try:
                            top = int(part[4:])
                        except ValueError:
                            self._send(400, {"v": API_VERSION, "error": "top must be an integer"})
                            return
                self._send(*service.stats(top))
                return
            if service.ui_dir:
                self._serve_static(path)
                return
            self._send(404, {"v": API_VERSION, "error": f"unknown endpoint {path}"})

        def _serve_static(self, path: str) -> None:
            rel = path.lstrip("/") or "index.html"
            full = os.path.realpath(os.path.join(service.ui_dir, rel))
            root = os.path.realpath(service.ui_dir)
            if not full.startswith(root + os.sep) and full != root:
                self._send(404, {"v": API_VERSION, "error": "not found"})
                return
            if os.path.isdir(full):
                full = os.path.join(full, "index.html")
            if not os.path.isfile(full):
                self._send(404, {"v": API_VERSION, "error": "not found"})
                return
            ctype = mimetypes.guess_type(full)[0] or "application/octet-stream"
            with open(full, "rb") as f:
                body = f.read()
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

    return Handler


def make_server(service: EngineService, host: str = "127.0.0.1", port: int = 8765) -> ThreadingHTTPServer:
    return ThreadingHTTPServer((host, port), make_handler(service))
