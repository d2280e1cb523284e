"""Neural first pass behind a confidence switch, rule engine second pass.

The neural model is an external process or socket speaking line-delimited
JSON (see :mod:`itnforge.mock_backend` for a reference peer)::

    -> {"id": 7, "text": "i have twenty dollars"}
    <- {"id": 7, "text": "i have $20", "confidence": 0.93}

If a reply arrives with confidence at or above the threshold, the reply
text gets the correction rules and a rule-engine pass. Otherwise, or when
the backend hangs, dies or talks nonsense, the rule engine runs on the raw
spoken input. A request never fails because of the backend.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
import queue
import re
import shlex
import socket
import subprocess
import threading
import time
from dataclasses import dataclass
from typing import Dict, IO, Iterable, List, Optional, Pattern, Sequence, Tuple, Union

from .grammar import Grammar
from .rules import itn

log = logging.getLogger(__name__)

CorrectionRule = Tuple[Pattern[str], str]


class BackendError(Exception):
    pass


class BackendTimeout(BackendError):
    pass


class BackendProtocolError(BackendError):
    pass


class BackendUnavailable(BackendError):
    pass


@dataclass(frozen=True)
class BackendResponse:
    id: int
    text: str
    confidence: float


@dataclass(frozen=True)
class HybridConfig:
    threshold: float = 0.5
    backend: Optional[str] = None
    timeout: float = 5.0
    correction_rules: Tuple[CorrectionRule, ...] = ()

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must be within [0, 1], got {self.threshold}")
        if not self.timeout > 0:
            raise ValueError(f"timeout must be positive, got {self.timeout}")


@dataclass(frozen=True)
class Decision:
    """Which path produced the output, and why."""

    path: str  # "neural" or "rule"
    reason: str
    confidence: Optional[float] = None
    neural_text: Optional[str] = None


def load_correction_rules(path: str) -> Tuple[CorrectionRule, ...]:
    """Tab-separated ``regex<TAB>replacement`` lines, applied in file order."""
    rules = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            pattern, sep, replacement = line.partition("\t")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected pattern<TAB>replacement")
            try:
                rules.append((re.compile(pattern), replacement))
            except re.error as exc:
                raise ValueError(f"{path}:{lineno}: bad pattern: {exc}") from None
    return tuple(rules)


def parse_response(line: str) -> BackendResponse:
    """Validate one reply line; out-of-range confidence is clamped with a warning."""
    try:
        rec = json.loads(line)
    except ValueError:
        raise BackendProtocolError(f"reply is not JSON: {line[:80]!r}") from None
    if not isinstance(rec, dict):
        raise BackendProtocolError("reply is not an object")
    rid, text, conf = rec.get("id"), rec.get("text"), rec.get("confidence")
    if not isinstance(rid, int) or isinstance(rid, bool):
        raise BackendProtocolError(f"reply id must be an integer, got {rid!r}")
    if not isinstance(text, str):
        raise BackendProtocolError(f"reply {rid}: text must be a string")
    if isinstance(conf, bool) or not isinstance(conf, (int, float)) or math.isnan(conf):
        raise BackendProtocolError(f"reply {rid}: confidence must be a number, got {conf!r}")
    if not 0.0 <= conf <= 1.0:
        clamped = min(1.0, max(0.0, float(conf)))
        log.warning("reply %d: confidence %r outside [0, 1], clamped to %s", rid, conf, clamped)
        conf = clamped
    return BackendResponse(rid, text, float(conf))


_EOF = object()


class BackendClient:
    """Pipelined request/response client for one backend endpoint.

    ``endpoint`` is ``tcp://host:port``, ``unix://path`` or a command line
    started as a child process. A reader thread drains replies into a queue;
    requests are matched to replies by id. Once the backend dies or sends a
    line that cannot be parsed it is treated as gone for the rest of the run,
    as is one that lets ``max_timeouts`` requests in a row time out without
    sending anything back.
    """

    def __init__(self, endpoint: str, timeout: float = 5.0, max_timeouts: int = 3):
        self.endpoint = endpoint
        self.timeout = timeout
        self.max_timeouts = max_timeouts
        self._silent_timeouts = 0
        self._ids = itertools.count(1)
        self._replies: "queue.Queue[object]" = queue.Queue()
        self._proc: Optional[subprocess.Popen] = None
        self._sock: Optional[socket.socket] = None
        self._wfile: Optional[IO[bytes]] = None
        self._broken: Optional[BackendError] = None
        self._lock = threading.Lock()
        self._connect()

    def _connect(self) -> None:
        try:
            if self.endpoint.startswith("tcp://"):
                host, _, port = self.endpoint[len("tcp://"):].rpartition(":")
                self._sock = socket.create_connection((host or "127.0.0.1", int(port)), timeout=self.timeout)
                self._sock.settimeout(None)
            elif self.endpoint.startswith("unix://"):
                self._sock = socket.socket(socket.AF_UNIX, socket.SOCK_STREAM)
                self._sock.settimeout(self.timeout)
                self._sock.connect(self.endpoint[len("unix://"):])
                self._sock.settimeout(None)
            else:
                self._proc = subprocess.Popen(shlex.split(self.endpoint), stdin=subprocess.PIPE,
                                              stdout=subprocess.PIPE)
        except (OSError, ValueError) as exc:
            self._broken = BackendUnavailable(f"cannot reach backend {self.endpoint!r}: {exc}")
            log.warning("%s", self._broken)
            return
        if self._sock is not None:
            rfile, self._wfile = self._sock.makefile("rb"), self._sock.makefile("wb")
        else:
            rfile, self._wfile = self._proc.stdout, self._proc.stdin
        threading.Thread(target=self._read, args=(rfile,), daemon=True, name="backend-reader").start()

    def _read(self, rfile: IO[bytes]) -> None:
        try:
            for raw in rfile:
                self._replies.put(raw.decode("utf-8", errors="replace"))
        except (OSError, ValueError):
            pass
        self._replies.put(_EOF)

    @property
    def alive(self) -> bool:
        return self._broken is None

    def _send(self, rid: int, text: str) -> None:
        line = json.dumps({"id": rid, "text": text}, ensure_ascii=False) + "\n"
        try:
            self._wfile.write(line.encode("utf-8"))
            self._wfile.flush()
        except (OSError, ValueError) as exc:
            raise BackendUnavailable(f"backend closed its input: {exc}") from None

    def request_many(self, texts: Sequence[str]) -> List[Union[BackendResponse, BackendError]]:
        """Send all ``texts`` at once and collect replies, in input order.

        Each slot holds the reply or the error that stands in for it. The
        wait ends once every reply is in, or after ``timeout`` seconds pass
        without any reply arriving.
        """
        with self._lock:
            if self._broken is not None:
                return [self._broken] * len(texts)
            ids = [next(self._ids) for _ in texts]
            slot = {rid: k for k, rid in enumerate(ids)}
            results: List[Optional[Union[BackendResponse, BackendError]]] = [None] * len(texts)
            try:
                for rid, text in zip(ids, texts):
                    self._send(rid, text)
            except BackendUnavailable as exc:
                self._broken = exc
                return [exc] * len(texts)
            pending = len(texts)
            while pending:
                try:
                    item = self._replies.get(timeout=self.timeout)
                except queue.Empty:
                    err = BackendTimeout(f"no reply within {self.timeout}s")
                    log.warning("%s; %d request(s) fall back to rules", err, pending)
                    self._silent_timeouts = self._silent_timeouts + 1 if pending == len(texts) else 0
                    if self._silent_timeouts >= self.max_timeouts:
                        self._broken = BackendUnavailable(
                            f"backend silent for {self._silent_timeouts} requests in a row")
                        log.warning("%s; backend disabled", self._broken)
                    return [r if r is not None else err for r in results]
                if item is _EOF:
                    self._broken = BackendUnavailable("backend closed its output")
                    log.warning("%s; %d request(s) fall back to rules", self._broken, pending)
                    return [r if r is not None else self._broken for r in results]
                line = str(item).strip()
                if not line:
                    continue
                try:
                    resp = parse_response(line)
                except BackendProtocolError as exc:
                    self._broken = exc
                    log.warning("protocol error: %s; backend disabled", exc)
                    return [r if r is not None else exc for r in results]
                k = slot.get(resp.id)
                if k is None or results[k] is not None:
                    log.debug("ignoring reply for unknown or answered id %d", resp.id)
                    continue
                results[k] = resp
                pending -= 1
            self._silent_timeouts = 0
            return results  # type: ignore[return-value]

    def roundtrip(self, text: str) -> BackendResponse:
        result = self.request_many([text])[0]
        if isinstance(result, BackendError):
            raise result
        return result

    def close(self) -> None:
        for f in (self._wfile,):
            try:
                if f is not None:
                    f.close()
            except OSError:
                pass
        if self._sock is not None:
            try:
                self._sock.close()
            except OSError:
                pass
        if self._proc is not None:
            try:
                self._proc.wait(timeout=1.0)
            except subprocess.TimeoutExpired:
                self._proc.kill()
                self._proc.wait()
            if self._proc.stdout is not None:
                self._proc.stdout.close()

    def __enter__(self) -> "BackendClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def second_pass(cfg: HybridConfig, g: Grammar, text: str) -> str:
    """Correction rules, then the rule engine, over neural output."""
    for pattern, replacement in cfg.correction_rules:
        text = pattern.sub(replacement, text)
    return itn(g, text)


def decide(cfg: HybridConfig, g: Grammar, spoken: str,
           reply: Union[BackendResponse, BackendError, None]) -> Tuple[str, Decision]:
    if reply is None:
        return itn(g, spoken), Decision("rule", "no backend")
    if isinstance(reply, BackendError):
        return itn(g, spoken), Decision("rule", f"{type(reply).__name__}: {reply}")
    if reply.confidence >= cfg.threshold:
        return second_pass(cfg, g, reply.text), Decision(
            "neural", f"confidence {reply.confidence:.3f} >= {cfg.threshold}", reply.confidence, reply.text)
    return itn(g, spoken), Decision(
        "rule", f"confidence {reply.confidence:.3f} < {cfg.threshold}", reply.confidence, reply.text)


def hybrid_batch(cfg: HybridConfig, g: Grammar, spoken: Sequence[str],
                 client: Optional[BackendClient] = None) -> List[Tuple[str, Decision]]:
    """Hybrid ITN over a batch; output order follows input order."""
    if client is None:
        replies: List[Union[BackendResponse, BackendError, None]] = [None] * len(spoken)
    else:
        replies = list(client.request_many(list(spoken)))
    return [decide(cfg, g, s, r) for s, r in zip(spoken, replies)]


def hybrid_itn(cfg: HybridConfig, g: Grammar, spoken: str,
               client: Optional[BackendClient] = None) -> Tuple[str, Decision]:
    return hybrid_batch(cfg, g, [spoken], client)[0]


def run_stream(cfg: HybridConfig, g: Grammar, lines: Iterable[str],
               batch_size: int = 64) -> Iterable[Tuple[str, Decision]]:
    """Hybrid ITN over a line stream, opening the configured backend if any."""
    client = BackendClient(cfg.backend, cfg.timeout) if cfg.backend else None
    try:
        batch: List[str] = []
        for line in lines:
            batch.append(line.rstrip("\r\n"))
            if len(batch) >= batch_size:
                yield from hybrid_batch(cfg, g, batch, client)
                batch = []
        if batch:
            yield from hybrid_batch(cfg, g, batch, client)
    finally:
        if client is not None:
            client.close()
