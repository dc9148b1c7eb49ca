"""HTTP client for the divkit scoring service.

Deliberately computation-free: every number comes back from the service,
which renders reals with 12 significant digits, so values here are exactly
the ones the CLI writes.  Requests against the stateless service are safe to
retry; transient transport failures and 5xx responses are retried with a
short backoff before giving up.

One client instance per caller; do not share across threads without
external synchronization.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import requests


class BridgeError(RuntimeError):
    """Transport or protocol failure after the configured retries."""


@dataclass(frozen=True)
class ClientConfig:
    endpoint: str = "http://127.0.0.1:8321"
    timeout: float = 10.0
    retries: int = 2
    alpha: float = 4.0
    mode: str = "fused"

    def __post_init__(self):
        if self.retries < 0:
            raise ValueError("retries must be >= 0")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.mode not in ("fused", "binary"):
            raise ValueError(f"unknown mode {self.mode!r}")


def _validate_group(texts: Sequence[str], verdicts: Sequence[bool]) -> None:
    if len(texts) != len(verdicts):
        raise ValueError(
            f"{len(texts)} texts but {len(verdicts)} verdicts; lengths must match"
        )
    if len(texts) == 0:
        raise ValueError("a group needs at least one solution")


def _group_record(question_id: str, texts: Sequence[str], verdicts: Sequence[bool]) -> dict:
    return {
        "v": 1,
        "question_id": question_id,
        "solutions": [
            {"solution_id": f"{question_id}-{i}", "text": t, "correct": bool(v)}
            for i, (t, v) in enumerate(zip(texts, verdicts))
        ],
    }


class ScoringClient:
    def __init__(self, config: ClientConfig | None = None):
        self.config = config or ClientConfig()
        self._session = requests.Session()

    def _post(self, path: str, payload: dict) -> dict:
        url = self.config.endpoint.rstrip("/") + path
        last_error: Exception | None = None
        for attempt in range(self.config.retries + 1):
            if attempt:
                time.sleep(min(0.2 * 2 ** (attempt - 1), 2.0))
            try:
                response = self._session.post(url, json=payload, timeout=self.config.timeout)
            except requests.RequestException as exc:
                last_error = exc
                continue
            if response.status_code >= 500:
                last_error = BridgeError(f"{url} returned {response.status_code}")
                continue
            if response.status_code != 200:
                raise BridgeError(
                    f"{url} returned {response.status_code}: {response.text[:200]}"
                )
            return response.json()
        raise BridgeError(
            f"{url} unreachable after {self.config.retries + 1} attempts"
        ) from last_error

    def score_group(
        self,
        texts: Sequence[str],
        verdicts: Sequence[bool],
        alpha: float | None = None,
    ) -> tuple[list[float], list[float]]:
        """Rewards and advantages for one generation group."""
        _validate_group(texts, verdicts)
        payload = {
            "groups": [_group_record("g", texts, verdicts)],
            "alpha": self.config.alpha if alpha is None else alpha,
            "mode": self.config.mode,
        }
        (score,) = self._post("/v1/score", payload)["scores"]
        return score["rewards"], score["advantages"]

    def divergence(self, texts: Sequence[str]) -> tuple[float, float]:
        """Global and local divergence of a set of texts."""
        if len(texts) == 0:
            raise ValueError("need at least one text")
        payload = {"sets": [_group_record("d", texts, [True] * len(texts))]}
        (report,) = self._post("/v1/divergence", payload)["reports"]
        return report["zeta_global"], report["zeta_local"]

    def trainer_hook(
        self,
        batch: Sequence[tuple[Sequence[str], Sequence[bool]]],
        alpha: float | None = None,
    ) -> list[list[float]]:
        """Per-group reward rows for a whole generation batch, in order."""
        for texts, verdicts in batch:
            _validate_group(texts, verdicts)
        payload = {
            "groups": [
                _group_record(f"b{i}", texts, verdicts)
                for i, (texts, verdicts) in enumerate(batch)
            ],
            "alpha": self.config.alpha if alpha is None else alpha,
            "mode": self.config.mode,
        }
        if not batch:
            return []
        scores = self._post("/v1/score", payload)["scores"]
        return [score["rewards"] for score in scores]

    def health(self) -> bool:
        url = self.config.endpoint.rstrip("/") + "/v1/health"
        try:
            response = self._session.get(url, timeout=self.config.timeout)
        except requests.RequestException:
            return False
        return response.status_code == 200
