import json
import threading
import time

import pytest
from hypothesis import given, strategies as st

from itnforge import mock_backend
from itnforge.hybrid import (BackendClient, BackendProtocolError, BackendResponse, BackendTimeout,
                             BackendUnavailable, HybridConfig, decide, hybrid_batch, hybrid_itn,
                             load_correction_rules, parse_response, run_stream, second_pass)
from itnforge.rules import itn

SPOKEN = ["i have twenty dollars", "october twenty twenty twenty", "it was priced at three thousand six "
          "hundred forty nine point eight four dollars"]


def test_parse_response_ok():
    assert parse_response('{"id": 3, "text": "x", "confidence": 0.5}') == BackendResponse(3, "x", 0.5)


def test_confidence_is_clamped_with_warning(caplog):
    assert parse_response('{"id": 1, "text": "x", "confidence": 1.7}').confidence == 1.0
    assert parse_response('{"id": 1, "text": "x", "confidence": -2}').confidence == 0.0
    assert "clamped" in caplog.text


@pytest.mark.parametrize("line", ["garbage", "[1, 2]", '{"id": "1", "text": "x", "confidence": 1}',
                                  '{"id": 1, "confidence": 1}', '{"id": 1, "text": "x", "confidence": "high"}',
                                  '{"id": 1, "text": "x", "confidence": NaN}', '{"id": true, "text": "x", "confidence": 1}'])
def test_parse_response_rejects(line):
    with pytest.raises(BackendProtocolError):
        parse_response(line)


def test_config_validation():
    with pytest.raises(ValueError):
        HybridConfig(threshold=1.5)
    with pytest.raises(ValueError):
        HybridConfig(timeout=0)


def test_switch_high_confidence(g):
    cfg = HybridConfig(threshold=0.5)
    text, d = decide(cfg, g, "i have twenty dollars", BackendResponse(1, "i have twenty dollars", 0.9))
    assert d.path == "neural" and text == "i have $20"


def test_switch_low_confidence(g):
    cfg = HybridConfig(threshold=0.5)
    text, d = decide(cfg, g, "i have twenty dollars", BackendResponse(1, "garbled output", 0.2))
    assert d.path == "rule" and text == "i have $20" and d.neural_text == "garbled output"


def test_already_normalized_neural_output_is_unchanged(g):
    cfg = HybridConfig(threshold=0.5)
    assert second_pass(cfg, g, "it was priced at $3649.84") == "it was priced at $3649.84"


def test_correction_rules_run_before_rules(g, tmp_path):
    path = tmp_path / "fix.tsv"
    path.write_text("# fix a common split\n3006 4 \\$9\\.84\t$3649.84\n", encoding="utf-8")
    cfg = HybridConfig(correction_rules=load_correction_rules(str(path)))
    assert second_pass(cfg, g, "priced at 3006 4 $9.84") == "priced at $3649.84"


def test_bad_correction_file(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("no tab here\n", encoding="utf-8")
    with pytest.raises(ValueError, match="bad.tsv:1"):
        load_correction_rules(str(path))


def test_no_backend_is_rule_only(g):
    text, d = hybrid_itn(HybridConfig(), g, "twenty one oh five")
    assert text == "2105" and d.path == "rule"


def test_subprocess_roundtrip_echo(mock_cmd):
    with BackendClient(f"{mock_cmd} --confidence 1.0", timeout=5) as client:
        assert client.roundtrip("hello there") == BackendResponse(1, "hello there", 1.0)
        assert client.roundtrip("again").id == 2


def test_subprocess_clamps(mock_cmd, caplog):
    with BackendClient(f"{mock_cmd} --confidence 1.7", timeout=5) as client:
        assert client.roundtrip("x").confidence == 1.0
    assert "clamped" in caplog.text


@pytest.mark.parametrize("flags,error", [
    ("--hang", BackendTimeout),
    ("--crash", BackendUnavailable),
    ("--garbage", BackendProtocolError),
])
def test_misbehaving_backends_raise(mock_cmd, flags, error):
    with BackendClient(f"{mock_cmd} {flags}", timeout=0.5) as client:
        with pytest.raises(error):
            client.roundtrip("x")


def test_silent_backend_is_disabled_after_repeated_timeouts(mock_cmd):
    with BackendClient(f"{mock_cmd} --hang", timeout=0.2, max_timeouts=2) as client:
        for _ in range(2):
            assert client.alive
            with pytest.raises(BackendTimeout):
                client.roundtrip("x")
        assert not client.alive
        start = time.perf_counter()
        with pytest.raises(BackendUnavailable):
            client.roundtrip("x")
        assert time.perf_counter() - start < 0.1


def test_answered_request_resets_timeout_count(mock_cmd):
    with BackendClient(f"{mock_cmd} --confidence 0.9", timeout=5, max_timeouts=1) as client:
        client._silent_timeouts = 0
        assert client.roundtrip("x").text == "x"
        assert client._silent_timeouts == 0 and client.alive


def test_missing_command():
    client = BackendClient("/nonexistent/backend-binary", timeout=0.5)
    assert not client.alive
    with pytest.raises(BackendUnavailable):
        client.roundtrip("x")


def test_pipelined_batch_keeps_order(g, mock_cmd):
    cfg = HybridConfig(threshold=0.5)
    with BackendClient(f"{mock_cmd} --mode itn --confidence 0.9", timeout=5) as client:
        out = hybrid_batch(cfg, g, SPOKEN * 10, client)
    assert [t for t, _ in out] == [itn(g, s) for s in SPOKEN * 10]
    assert all(d.path == "neural" for _, d in out)


def test_crash_mid_batch_falls_back(g, mock_cmd):
    cfg = HybridConfig(threshold=0.0, backend=f"{mock_cmd} --crash-after 2", timeout=2)
    out = list(run_stream(cfg, g, SPOKEN * 2, batch_size=6))
    assert [t for t, _ in out] == [itn(g, s) for s in SPOKEN * 2]
    assert [d.path for _, d in out] == ["neural", "neural", "rule", "rule", "rule", "rule"]


def test_script_substitution(g, mock_cmd, tmp_path):
    script = tmp_path / "script.tsv"
    script.write_text("twenty\tXX\n", encoding="utf-8")
    cfg = HybridConfig(threshold=0.0)
    with BackendClient(f"{mock_cmd} --script {script}", timeout=5) as client:
        text, d = hybrid_itn(cfg, g, "i have twenty apples", client)
    assert d.neural_text == "i have XX apples" and text == "i have XX apples"


def test_socket_backend(g, tmp_path):
    backend = mock_backend.MockBackend(confidence=0.8, mode="itn")
    sock = mock_backend.listen("tcp://127.0.0.1:0")
    port = sock.getsockname()[1]
    threading.Thread(target=mock_backend.serve_socket, args=(backend, sock), daemon=True).start()
    try:
        with BackendClient(f"tcp://127.0.0.1:{port}", timeout=5) as client:
            out = hybrid_batch(HybridConfig(threshold=0.5), g, SPOKEN, client)
    finally:
        sock.close()
    assert [t for t, _ in out] == [itn(g, s) for s in SPOKEN]
    assert {d.path for _, d in out} == {"neural"}


def test_unix_socket_backend(g, tmp_path):
    path = tmp_path / "be.sock"
    sock = mock_backend.listen(f"unix://{path}")
    threading.Thread(target=mock_backend.serve_socket, args=(mock_backend.MockBackend(), sock), daemon=True).start()
    try:
        with BackendClient(f"unix://{path}", timeout=5) as client:
            assert client.roundtrip("hello").text == "hello"
    finally:
        sock.close()


def test_mock_respond_unit():
    b = mock_backend.MockBackend(confidence=0.3)
    assert json.loads(b.respond('{"id": 4, "text": "x"}')) == {"id": 4, "text": "x", "confidence": 0.3}
    assert "error" in json.loads(b.respond("nonsense"))
    assert mock_backend.MockBackend(hang=True).respond('{"id": 1, "text": "x"}') is None


@given(st.lists(st.floats(min_value=0, max_value=1), min_size=1, max_size=20),
       st.floats(min_value=0, max_value=1), st.floats(min_value=0, max_value=1))
def test_threshold_monotonicity(g, confidences, t1, t2):
    lo, hi = sorted((t1, t2))
    replies = [BackendResponse(k, "x", c) for k, c in enumerate(confidences)]

    def neural(t):
        return sum(decide(HybridConfig(threshold=t), g, "x", r)[1].path == "neural" for r in replies)

    assert neural(hi) <= neural(lo)
