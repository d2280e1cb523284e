"""Stand-in neural ITN backend speaking the line-delimited JSON protocol.

Reads ``{"id": int, "text": str}`` records and answers
``{"id": int, "text": str, "confidence": float}``, one per line. Flags make
it misbehave on purpose (hang, crash, emit garbage) so the hybrid runner's
fallbacks can be exercised.

    python -m itnforge.mock_backend --confidence 0.9 --script fixes.tsv
    python -m itnforge.mock_backend --listen tcp://127.0.0.1:7070
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import socket
import sys
import time
from typing import IO, List, Optional, Pattern, Sequence, Tuple

log = logging.getLogger("itnforge.mock_backend")


def load_script(path: str) -> List[Tuple[Pattern[str], str]]:
    """Tab-separated ``regex<TAB>replacement`` lines; ``#`` starts a comment."""
    rules = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            pattern, _, replacement = line.partition("\t")
            rules.append((re.compile(pattern), replacement))
    return rules


class MockBackend:
    def __init__(self, confidence: float = 1.0, script: Sequence[Tuple[Pattern[str], str]] = (),
                 mode: str = "echo", delay: float = 0.0, hang: bool = False,
                 crash_after: Optional[int] = None, garbage: bool = False):
        self.confidence = confidence
        self.script = list(script)
        self.mode = mode
        self.delay = delay
        self.hang = hang
        self.crash_after = crash_after
        self.garbage = garbage
        self.handled = 0
        self._grammar = None

    def transform(self, text: str) -> str:
        if self.mode == "itn":
            from .grammar import default_grammar
            from .rules import itn

            if self._grammar is None:
                self._grammar = default_grammar()
            text = itn(self._grammar, text)
        for pattern, replacement in self.script:
            text = pattern.sub(replacement, text)
        return text

    def respond(self, line: str) -> Optional[str]:
        """The reply line for one request line, or None to stay silent."""
        if self.crash_after is not None and self.handled >= self.crash_after:
            log.error("mock backend crashing after %d requests", self.handled)
            sys.stderr.flush()
            os._exit(3)
        self.handled += 1
        if self.hang:
            return None
        if self.delay:
            time.sleep(self.delay)
        if self.garbage:
            return "<<not json>> " + line.strip()[::-1]
        try:
            req = json.loads(line)
            rid, text = req["id"], req["text"]
        except (ValueError, KeyError, TypeError):
            return json.dumps({"error": "bad request"})
        return json.dumps({"id": rid, "text": self.transform(text), "confidence": self.confidence},
                          ensure_ascii=False)

    def serve(self, rfile: IO[bytes], wfile: IO[bytes]) -> None:
        for raw in rfile:
            line = raw.decode("utf-8", errors="replace")
            if not line.strip():
                continue
            reply = self.respond(line)
            if reply is not None:
                wfile.write(reply.encode("utf-8") + b"\n")
                wfile.flush()


def listen(address: str) -> socket.socket:
    """Bind ``tcp://host:port`` or ``unix://path`` and start listening."""
    if address.startswith("tcp://"):
        host, _, port = address[len("tcp://"):].rpartition(":")
        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        sock.bind((host or "127.0.0.1", int(port)))
    elif address.startswith("unix://"):
        sock = socket.socket(socket.AF_UNIX, socket.SOCK_STREAM)
        sock.bind(address[len("unix://"):])
    else:
        raise ValueError(f"unsupported listen address {address!r}")
    sock.listen()
    return sock


def serve_socket(backend: MockBackend, sock: socket.socket) -> None:
    """Serve connections one after another until the socket is closed."""
    while True:
        try:
            conn, _ = sock.accept()
        except OSError:
            return
        with conn, conn.makefile("rb") as rfile, conn.makefile("wb") as wfile:
            try:
                backend.serve(rfile, wfile)
            except (BrokenPipeError, ConnectionResetError):
                pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="itnforge-mock-backend", description=__doc__.splitlines()[0])
    p.add_argument("--confidence", type=float, default=1.0,
                   help="confidence attached to every reply; out-of-range values are sent as-is")
    p.add_argument("--mode", choices=["echo", "itn"], default="echo",
                   help="echo the input, or run the rule engine on it first")
    p.add_argument("--script", help="TSV of regex/replacement pairs applied to the reply text")
    p.add_argument("--delay", type=float, default=0.0, help="seconds to sleep before each reply")
    p.add_argument("--hang", action="store_true", help="read requests but never reply")
    p.add_argument("--crash", action="store_true", help="exit on the first request")
    p.add_argument("--crash-after", type=int, help="exit after answering N requests")
    p.add_argument("--garbage", action="store_true", help="reply with lines that are not JSON")
    p.add_argument("--listen", metavar="ADDR", help="serve tcp://host:port or unix://path instead of stdio")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s", stream=sys.stderr)
    backend = MockBackend(
        confidence=args.confidence,
        script=load_script(args.script) if args.script else (),
        mode=args.mode,
        delay=args.delay,
        hang=args.hang,
        crash_after=0 if args.crash else args.crash_after,
        garbage=args.garbage,
    )
    if args.listen:
        sock = listen(args.listen)
        bound = sock.getsockname()
        log.info("listening on %s", args.listen if isinstance(bound, str) else f"tcp://{bound[0]}:{bound[1]}")
        try:
            serve_socket(backend, sock)
        except KeyboardInterrupt:
            pass
        return 0
    try:
        backend.serve(sys.stdin.buffer, sys.stdout.buffer)
    except (BrokenPipeError, KeyboardInterrupt):
        pass
    return 0


if __name__ == "__main__":
    sys.exit(main())
