from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor

import pytest
from fastapi.testclient import TestClient

from divkit.service import create_app


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


def group(question_id, pairs):
    return {
        "v": 1,
        "question_id": question_id,
        "solutions": [
            {"solution_id": f"{question_id}-{i}", "text": t, "correct": c}
            for i, (t, c) in enumerate(pairs)
        ],
    }


def strip_elapsed(body: bytes) -> dict:
    payload = json.loads(body)
    payload.pop("elapsed_ms", None)
    return payload


class TestHealth:
    def test_ok(self, client):
        response = client.get("/v1/health")
        assert response.status_code == 200
        assert response.content == b'{"status": "ok", "v": 1}'


class TestScore:
    def test_identical_all_correct_group(self, client):
        response = client.post(
            "/v1/score", json={"groups": [group("q", [("same", True)] * 4)]}
        )
        assert response.status_code == 200
        payload = response.json()
        (score,) = payload["scores"]
        assert score["rewards"] == [0.0] * 4
        assert score["advantages"] == [0.0] * 4
        assert isinstance(payload["elapsed_ms"], int)

    def test_empty_groups(self, client):
        response = client.post("/v1/score", json={"groups": []})
        assert response.status_code == 200
        assert response.json()["scores"] == []

    def test_group_cap_413(self, client):
        groups = [group(f"q{i}", [("t", True)]) for i in range(1025)]
        response = client.post("/v1/score", json={"groups": groups})
        assert response.status_code == 413

    def test_unverified_solution_422(self, client):
        response = client.post(
            "/v1/score", json={"groups": [group("q", [("a", True), ("b", None)])]}
        )
        assert response.status_code == 422
        assert "unverified" in response.json()["error"]

    def test_schema_violation_400_with_field_path(self, client):
        response = client.post("/v1/score", json={"groups": [{"question_id": "q"}]})
        assert response.status_code == 400
        payload = response.json()
        assert payload["error"] == "schema violation"
        assert any("solutions" in d["field"] for d in payload["details"])

    def test_malformed_body_400(self, client):
        response = client.post(
            "/v1/score", content=b"{not json", headers={"content-type": "application/json"}
        )
        assert response.status_code == 400

    def test_binary_mode(self, client):
        response = client.post(
            "/v1/score",
            json={"groups": [group("q", [("a", True), ("b", False)])], "mode": "binary"},
        )
        (score,) = response.json()["scores"]
        assert score["rewards"] == [1.0, -1.0]

    def test_alpha_passthrough(self, client):
        body = {
            "groups": [group("q", [("xx", True), ("xy", True), ("zz", False), ("zw", False)])],
            "alpha": 4.0,
        }
        (score,) = client.post("/v1/score", json=body).json()["scores"]
        assert score["total"] == pytest.approx(0.5**4 * 0.5 - 2.0, abs=1e-12)

    def test_deterministic_and_order_aligned(self, client):
        body = {
            "groups": [
                group("q-b", [("aa", True), ("ab", True)]),
                group("q-a", [("x", True), ("y", False)]),
            ]
        }
        first = client.post("/v1/score", json=body)
        second = client.post("/v1/score", json=body)
        assert strip_elapsed(first.content) == strip_elapsed(second.content)
        assert [s["question_id"] for s in first.json()["scores"]] == ["q-b", "q-a"]

    def test_parallel_identical_requests_agree(self, client):
        body = {"groups": [group(f"q{i}", [("aa", True), ("ab", True), ("zz", False)]) for i in range(5)]}

        def call(_):
            return strip_elapsed(client.post("/v1/score", json=body).content)

        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(call, range(16)))
        assert all(r == results[0] for r in results)

    def test_stateless_across_interleaving(self, client):
        a = {"groups": [group("qa", [("aa", True), ("bb", True)])]}
        b = {"groups": [group("qb", [("cc", True), ("cd", False)])], "alpha": 2.0}
        first_a = strip_elapsed(client.post("/v1/score", json=a).content)
        client.post("/v1/score", json=b)
        client.post("/v1/divergence", json={"sets": a["groups"]})
        again_a = strip_elapsed(client.post("/v1/score", json=a).content)
        assert first_a == again_a


class TestDivergence:
    def test_matches_cli_records(self, client, tmp_path):
        from divkit.cli import main
        from divkit.jsonio import dumps_canonical

        texts = ["alpha", "beta", "alpha beta"]
        records = [
            {"v": 1, "question_id": "q", "solution_id": f"s{i}", "text": t, "correct": True}
            for i, t in enumerate(texts)
        ]
        solutions = tmp_path / "s.jsonl"
        solutions.write_text("".join(dumps_canonical(r) + "\n" for r in records))
        out = tmp_path / "r.jsonl"
        assert main(["divergence", "--solutions", str(solutions), "-o", str(out)]) == 0
        cli_line = out.read_text().splitlines()[0]

        body = {
            "sets": [
                {
                    "v": 1,
                    "question_id": "q",
                    "solutions": [
                        {"solution_id": f"s{i}", "text": t, "correct": True}
                        for i, t in enumerate(texts)
                    ],
                }
            ]
        }
        response = client.post("/v1/divergence", json=body)
        (report,) = response.json()["reports"]
        assert dumps_canonical(report) == cli_line

    def test_singleton_set_zeros(self, client):
        body = {"sets": [group("q", [("only", True)])]}
        (report,) = client.post("/v1/divergence", json=body).json()["reports"]
        assert report["zeta_global"] == 0.0
        assert report["zeta_local"] == 0.0

    def test_malformed_body_400(self, client):
        response = client.post("/v1/divergence", json={"sets": "nope"})
        assert response.status_code == 400

    def test_convention_flag(self, client):
        body = {"sets": [group("q", [("x", True), ("y", True)])], "convention": "self_loop"}
        (report,) = client.post("/v1/divergence", json=body).json()["reports"]
        assert report["convention"] == "self_loop"
        assert report["zeta_global_spectral"] == pytest.approx(report["zeta_global"], abs=1e-9)
