"""Fallback transport: shell out to the divkit CLI with temp JSONL files.

Same surface as the HTTP client, same numbers (the CLI and service share
one rendering contract), no running service required.
"""

from __future__ import annotations

import json
import subprocess
import sys
import tempfile
from pathlib import Path
from typing import Sequence

from .client import BridgeError, _group_record, _validate_group

DEFAULT_COMMAND = (sys.executable, "-m", "divkit.cli")


class CliBridge:
    def __init__(self, command: Sequence[str] = DEFAULT_COMMAND, alpha: float = 4.0, mode: str = "fused"):
        self.command = tuple(command)
        self.alpha = alpha
        self.mode = mode

    def _run(self, args: list[str]) -> None:
        result = subprocess.run(
            [*self.command, *args], capture_output=True, text=True
        )
        if result.returncode != 0:
            raise BridgeError(
                f"divkit {args[0]} exited {result.returncode}: {result.stderr.strip()[:200]}"
            )

    def score_group(
        self,
        texts: Sequence[str],
        verdicts: Sequence[bool],
        alpha: float | None = None,
    ) -> tuple[list[float], list[float]]:
        _validate_group(texts, verdicts)
        with tempfile.TemporaryDirectory() as tmp:
            groups = Path(tmp) / "groups.jsonl"
            scores = Path(tmp) / "scores.jsonl"
            groups.write_text(json.dumps(_group_record("g", texts, verdicts)) + "\n")
            self._run(
                [
                    "reward-score",
                    "--groups",
                    str(groups),
                    "--alpha",
                    str(self.alpha if alpha is None else alpha),
                    "--mode",
                    self.mode,
                    "-o",
                    str(scores),
                ]
            )
            (record,) = [json.loads(line) for line in scores.read_text().splitlines()]
        return record["rewards"], record["advantages"]

    def divergence(self, texts: Sequence[str]) -> tuple[float, float]:
        if len(texts) == 0:
            raise ValueError("need at least one text")
        with tempfile.TemporaryDirectory() as tmp:
            solutions = Path(tmp) / "solutions.jsonl"
            reports = Path(tmp) / "reports.jsonl"
            lines = [
                json.dumps(
                    {
                        "v": 1,
                        "question_id": "d",
                        "solution_id": f"d-{i}",
                        "text": t,
                        "correct": True,
                    }
                )
                for i, t in enumerate(texts)
            ]
            solutions.write_text("\n".join(lines) + "\n")
            self._run(["divergence", "--solutions", str(solutions), "-o", str(reports)])
            (record,) = [json.loads(line) for line in reports.read_text().splitlines()]
        return record["zeta_global"], record["zeta_local"]
