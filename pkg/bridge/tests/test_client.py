from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from train_bridge import BridgeError, ClientConfig, CliBridge, ScoringClient


def client_for(port: int, **overrides) -> ScoringClient:
    return ScoringClient(ClientConfig(endpoint=f"http://127.0.0.1:{port}", **overrides))


class TestClientValidation:
    def test_mismatched_lengths_fail_before_any_request(self):
        # endpoint points at a dead port: a network attempt would surface as
        # BridgeError, so the ValueError proves validation ran first
        client = client_for(1, retries=0)
        with pytest.raises(ValueError, match="lengths must match"):
            client.score_group(["a", "b"], [True])

    def test_empty_group_rejected(self):
        client = client_for(1, retries=0)
        with pytest.raises(ValueError):
            client.score_group([], [])
        with pytest.raises(ValueError):
            client.divergence([])

    def test_config_invariants(self):
        with pytest.raises(ValueError):
            ClientConfig(retries=-1)
        with pytest.raises(ValueError):
            ClientConfig(timeout=0)
        with pytest.raises(ValueError):
            ClientConfig(mode="other")


class TestAgainstService:
    def test_all_incorrect_group(self, service_port):
        client = client_for(service_port)
        rewards, advantages = client.score_group(["a", "b", "c", "d"], [False] * 4)
        assert rewards == [-1.0] * 4
        assert advantages == [0.0] * 4

    def test_hand_case_two_of_four(self, service_port):
        # {xx, xy correct; zz, zw wrong}: total = (1/2)^4 * 0.5 - 2
        client = client_for(service_port)
        rewards, _ = client.score_group(
            ["xx", "xy", "zz", "zw"], [True, True, False, False], alpha=4.0
        )
        assert sum(rewards) == pytest.approx(0.5**4 * 0.5 - 2.0, abs=1e-9)

    def test_divergence_identical_texts(self, service_port):
        assert client_for(service_port).divergence(["same", "same", "same"]) == (0.0, 0.0)

    def test_divergence_two_distinct_texts(self, service_port):
        # unit divergence pair: closed form 1.0, disconnected graph gives 2.0
        zeta_global, zeta_local = client_for(service_port).divergence(["a", "b"])
        assert zeta_global == pytest.approx(1.0, abs=1e-9)
        assert zeta_local == pytest.approx(2.0, abs=1e-9)

    def test_binary_mode(self, service_port):
        client = ScoringClient(
            ClientConfig(endpoint=f"http://127.0.0.1:{service_port}", mode="binary")
        )
        rewards, _ = client.score_group(["a", "b"], [True, False])
        assert rewards == [1.0, -1.0]

    def test_trainer_hook_shapes_and_order(self, service_port):
        client = client_for(service_port)
        batch = [
            (tuple(f"g0-{i}" for i in range(8)), (True,) * 8),
            (tuple("same" for _ in range(8)), (True,) * 8),
        ]
        rows = client.trainer_hook(batch)
        assert len(rows) == 2
        assert all(len(r) == 8 for r in rows)
        assert rows[1] == [0.0] * 8  # identical texts earn zero divergence pay
        assert rows[0] != rows[1]  # order preserved, distinct groups distinct
        assert client.trainer_hook([]) == []

    def test_health(self, service_port):
        assert client_for(service_port).health()
        assert not client_for(1).health()


class TestRetries:
    def make_flaky_server(self, failures: int):
        state = {"calls": 0}
        canned = {
            "scores": [
                {
                    "v": 1,
                    "question_id": "g",
                    "rewards": [0.0],
                    "advantages": [0.0],
                    "total": 0.0,
                    "correct_count": 1,
                }
            ],
            "elapsed_ms": 0,
        }

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                self.rfile.read(int(self.headers.get("content-length", 0)))
                state["calls"] += 1
                if state["calls"] <= failures:
                    self.send_response(503)
                    self.end_headers()
                    return
                body = json.dumps(canned).encode()
                self.send_response(200)
                self.send_header("content-type", "application/json")
                self.send_header("content-length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def log_message(self, *args):
                pass

        server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        return server, state

    def test_retries_recover_from_transient_failures(self):
        server, state = self.make_flaky_server(failures=2)
        try:
            client = client_for(server.server_address[1], retries=2)
            rewards, advantages = client.score_group(["x"], [True])
            assert rewards == [0.0]
            assert state["calls"] == 3  # two failures, one success
        finally:
            server.shutdown()

    def test_exhausted_retries_raise(self):
        server, state = self.make_flaky_server(failures=10)
        try:
            client = client_for(server.server_address[1], retries=1)
            with pytest.raises(BridgeError):
                client.score_group(["x"], [True])
            assert state["calls"] == 2
        finally:
            server.shutdown()

    def test_service_down_raises_after_retries(self):
        client = client_for(1, retries=1)
        with pytest.raises(BridgeError, match="after 2 attempts"):
            client.trainer_hook([(("a",), (True,))])


class TestCliBridge:
    def test_score_group_matches_service(self, service_port):
        texts = ["alpha", "beta", "gamma", "alpha beta"]
        verdicts = [True, True, False, True]
        via_http = client_for(service_port).score_group(texts, verdicts)
        via_cli = CliBridge().score_group(texts, verdicts)
        assert via_cli == via_http

    def test_divergence_matches_service(self, service_port):
        texts = ["one two", "one three", "four"]
        assert CliBridge().divergence(texts) == client_for(service_port).divergence(texts)

    def test_validation_applies(self):
        with pytest.raises(ValueError):
            CliBridge().score_group(["a"], [])
