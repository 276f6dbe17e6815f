"""Gateway backends, transcripts, fence stripping."""

from __future__ import annotations

import pytest

from tracedoc.errors import GatewayError
from tracedoc.gateway import (
    ChatMessage, CompletionRequest, LiveGateway, MockGateway, ReplayGateway,
    Transcript, gateway_from_env, strip_fences,
    ENV_BACKEND, ENV_ENDPOINT, ENV_MOCK_SCRIPT, ENV_TRANSCRIPT,
)


def request(text="hi"):
    return CompletionRequest((ChatMessage("system", "sys"), ChatMessage("user", text)))


class TestMock:
    def test_scripted_responses_in_order(self):
        gw = MockGateway(['(model_ "LSTM" tableData).time_s', "second"])
        assert gw.complete(request()) == '(model_ "LSTM" tableData).time_s'
        assert gw.complete(request()) == "second"

    def test_exhausted_queue_is_transport_error(self):
        gw = MockGateway([])
        with pytest.raises(GatewayError):
            gw.complete(request())

    def test_transcript_appends_per_exchange(self):
        gw = MockGateway(["a", "b"])
        gw.complete(request("one"))
        gw.complete(request("two"))
        assert [e["response"] for e in gw.transcript.entries] == ["a", "b"]
        assert gw.transcript.entries[0]["request"]["messages"][1]["content"] == "one"

    def test_determinism_across_instances(self):
        script = ["x", "y", "z"]
        seq1 = [MockGateway(list(script)).complete(request()) for _ in range(1)]
        gw1, gw2 = MockGateway(list(script)), MockGateway(list(script))
        out1 = [gw1.complete(request(str(i))) for i in range(3)]
        out2 = [gw2.complete(request(str(i))) for i in range(3)]
        assert out1 == out2 == script
        assert seq1 == ["x"]


class TestReplay:
    def test_replays_recorded_transcript(self, tmp_path):
        path = tmp_path / "t.jsonl"
        recording = MockGateway(["first", "second"], Transcript(path=path))
        recording.complete(request())
        recording.complete(request())

        replay = ReplayGateway(Transcript.load(path))
        assert replay.complete(request()) == "first"
        assert replay.complete(request()) == "second"
        with pytest.raises(GatewayError):
            replay.complete(request())


class TestLive:
    def test_unreachable_endpoint_is_transport_error_without_transcript_entry(self):
        gw = LiveGateway("http://127.0.0.1:9/v1/chat/completions", "m", timeout=0.5)
        with pytest.raises(GatewayError):
            gw.complete(request())
        assert gw.transcript.entries == []


class TestFromEnv:
    def test_mock_from_script_file(self, tmp_path):
        script = tmp_path / "script.json"
        script.write_text('["hello"]')
        gw = gateway_from_env({ENV_BACKEND: "mock", ENV_MOCK_SCRIPT: str(script)})
        assert gw.complete(request()) == "hello"

    def test_default_is_mock(self):
        assert isinstance(gateway_from_env({}), MockGateway)

    def test_replay_requires_transcript(self):
        with pytest.raises(GatewayError):
            gateway_from_env({ENV_BACKEND: "replay"})

    def test_live_requires_endpoint(self):
        with pytest.raises(GatewayError):
            gateway_from_env({ENV_BACKEND: "live"})

    def test_unknown_backend(self):
        with pytest.raises(GatewayError):
            gateway_from_env({ENV_BACKEND: "quantum"})

    def test_transcript_recording_from_env(self, tmp_path):
        script = tmp_path / "script.json"
        script.write_text('["resp"]')
        log = tmp_path / "log.jsonl"
        gw = gateway_from_env({ENV_BACKEND: "mock", ENV_MOCK_SCRIPT: str(script),
                               ENV_TRANSCRIPT: str(log)})
        gw.complete(request())
        assert len(Transcript.load(log).entries) == 1


class TestStripFences:
    @pytest.mark.parametrize("raw,expected", [
        ("```\nordinal 3\n```", "ordinal 3"),
        ("ordinal 3", "ordinal 3"),
        ("```fluid\nx\n```", "x"),
        ("  trimmed  ", "trimmed"),
        ("```\nmulti\nline\n```", "multi\nline"),
    ])
    def test_examples(self, raw, expected):
        assert strip_fences(raw) == expected

    @pytest.mark.parametrize("raw", [
        "```\nordinal 3\n```", "plain", "```python\n1+1\n```", "``", "```", "`x`",
    ])
    def test_idempotent(self, raw):
        once = strip_fences(raw)
        assert strip_fences(once) == once
