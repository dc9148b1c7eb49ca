"""Versioned JSONL schemas and canonical JSON rendering.

All real numbers are serialized with 12 significant digits (round-half-even),
so identical values render to identical bytes across the CLI, the scoring
service, and any client.  Re-reading and re-writing a record is a fixed
point: a 12-digit decimal survives the float round trip unchanged.
"""

from __future__ import annotations

import json
import math
from typing import Any, Iterable, Iterator

import numpy as np

from .analysis import TrialMatrix
from .divergence import DivergenceReport, Solution, SolutionSet
from .errors import SchemaError
from .maze import MazeSpec
from .reward import GroupScore

SCHEMA_VERSION = 1

__all__ = [
    "SCHEMA_VERSION",
    "format_real",
    "dumps_canonical",
    "read_jsonl",
    "write_jsonl",
    "parse_solution_record",
    "group_solutions",
    "parse_group_record",
    "set_to_group_record",
    "score_to_record",
    "report_to_record",
    "maze_to_record",
    "parse_maze_record",
    "path_answer_record",
    "parse_path_record",
    "parse_trial_record",
    "trials_to_matrices",
]


def format_real(x: float) -> str:
    """12 significant digits; integral values keep a trailing .0."""
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    s = f"{x:.12g}"
    if "." not in s and "e" not in s:
        s += ".0"
    return s


def dumps_canonical(obj: Any) -> str:
    """Deterministic JSON: insertion-ordered keys, ASCII escapes, 12-digit reals."""
    parts: list[str] = []
    _render(obj, parts)
    return "".join(parts)


def _render(obj: Any, out: list[str]) -> None:
    if obj is None or obj is True or obj is False:
        out.append(json.dumps(obj))
    elif isinstance(obj, (np.bool_,)):
        out.append(json.dumps(bool(obj)))
    elif isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_real(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(key), ensure_ascii=True))
            out.append(": ")
            _render(value, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, value in enumerate(obj):
            if i:
                out.append(", ")
            _render(value, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def read_jsonl(lines: Iterable[str]) -> Iterator[tuple[int, dict]]:
    """Yield (line number, record) pairs; blank lines are skipped."""
    for n, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON ({exc.msg})", line=n) from exc
        if not isinstance(record, dict):
            raise SchemaError("record is not a JSON object", line=n)
        yield n, record


def write_jsonl(path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(dumps_canonical(record))
            fh.write("\n")


def _check_version(record: dict, line: int | None) -> None:
    v = record.get("v")
    if v != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {v!r}", line=line)


def _str_field(record: dict, key: str, line: int | None) -> str:
    value = record.get(key)
    if not isinstance(value, str):
        raise SchemaError(f"field {key!r} must be a string", line=line)
    return value


def _verdict_field(record: dict, key: str, line: int | None) -> bool | None:
    value = record.get(key)
    if value is None:
        return None
    if not isinstance(value, bool):
        raise SchemaError(f"field {key!r} must be a boolean or null", line=line)
    return value


def _int_field(record: dict, key: str, line: int | None) -> int:
    value = record.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"field {key!r} must be an integer", line=line)
    return value


def parse_solution_record(record: dict, line: int | None = None) -> dict:
    """Validated flat solution record (one solution of one question)."""
    _check_version(record, line)
    out = {
        "question_id": _str_field(record, "question_id", line),
        "solution_id": _str_field(record, "solution_id", line),
        "text": _str_field(record, "text", line),
        "correct": _verdict_field(record, "correct", line),
    }
    if "model" in record and record["model"] is not None:
        out["model"] = _str_field(record, "model", line)
    if "trial" in record and record["trial"] is not None:
        out["trial"] = _int_field(record, "trial", line)
    return out


def group_solutions(parsed: Iterable[dict]) -> list[tuple[str | None, SolutionSet]]:
    """Group flat solution records into sets, preserving first-seen order.

    Records are grouped per question, and additionally per model when the
    field is present.
    """
    order: list[tuple[str | None, str]] = []
    buckets: dict[tuple[str | None, str], list[Solution]] = {}
    for rec in parsed:
        key = (rec.get("model"), rec["question_id"])
        if key not in buckets:
            buckets[key] = []
            order.append(key)
        buckets[key].append(Solution(rec["solution_id"], rec["text"], rec["correct"]))
    return [
        (model, SolutionSet(question_id, tuple(buckets[(model, question_id)])))
        for model, question_id in order
    ]


def parse_group_record(record: dict, line: int | None = None) -> SolutionSet:
    _check_version(record, line)
    question_id = _str_field(record, "question_id", line)
    raw = record.get("solutions")
    if not isinstance(raw, list):
        raise SchemaError("field 'solutions' must be an array", line=line)
    solutions = []
    for entry in raw:
        if not isinstance(entry, dict):
            raise SchemaError("solution entries must be objects", line=line)
        solutions.append(
            Solution(
                _str_field(entry, "solution_id", line),
                _str_field(entry, "text", line),
                _verdict_field(entry, "correct", line),
            )
        )
    return SolutionSet(question_id, tuple(solutions))


def set_to_group_record(solution_set: SolutionSet) -> dict:
    return {
        "v": SCHEMA_VERSION,
        "question_id": solution_set.question_id,
        "solutions": [
            {"solution_id": s.id, "text": s.text, "correct": s.correct}
            for s in solution_set.solutions
        ],
    }


def score_to_record(question_id: str, score: GroupScore) -> dict:
    return {
        "v": SCHEMA_VERSION,
        "question_id": question_id,
        "rewards": [float(r) for r in score.per_solution],
        "advantages": [float(a) for a in score.advantages],
        "total": float(score.total),
        "correct_count": score.correct_count,
    }


def report_to_record(
    question_id: str,
    report: DivergenceReport,
    model: str | None = None,
) -> dict:
    record = {
        "v": SCHEMA_VERSION,
        "question_id": question_id,
        "zeta_global": float(report.zeta_global),
        "zeta_local": float(report.zeta_local),
        "spectrum": [float(x) for x in report.spectrum],
        "convention": report.convention.value,
        "zeta_global_spectral": float(report.zeta_global_spectral),
        "zeta_local_spectral": float(report.zeta_local_spectral),
    }
    if model is not None:
        record["model"] = model
    return record


def maze_to_record(maze_id: str, spec: MazeSpec) -> dict:
    return {
        "id": maze_id,
        "grid": spec.grid_max,
        "target": [spec.target[0], spec.target[1]],
        "blocked": [[x, y] for x, y in sorted(spec.blocked)],
        "seed": spec.seed,
    }


def _point(value, field: str, line: int | None) -> tuple[int, int]:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or any(isinstance(c, bool) or not isinstance(c, int) for c in value)
    ):
        raise SchemaError(f"field {field!r} must be an [x, y] integer pair, got {value!r}", line=line)
    return (value[0], value[1])


def parse_maze_record(record: dict, line: int | None = None) -> tuple[str, MazeSpec]:
    maze_id = _str_field(record, "id", line)
    grid = _int_field(record, "grid", line)
    target = _point(record.get("target"), "target", line)
    raw_blocked = record.get("blocked")
    if not isinstance(raw_blocked, list):
        raise SchemaError("field 'blocked' must be an array", line=line)
    blocked = frozenset(_point(p, "blocked", line) for p in raw_blocked)
    seed = _int_field(record, "seed", line) if "seed" in record else 0
    return maze_id, MazeSpec(target=target, blocked=blocked, grid_max=grid, seed=seed)


def path_answer_record(answer_id: str, answer: str) -> dict:
    return {"id": answer_id, "answer": answer}


def parse_path_record(record: dict, line: int | None = None) -> tuple[str, str]:
    return _str_field(record, "id", line), _str_field(record, "answer", line)


def parse_trial_record(record: dict, line: int | None = None) -> dict:
    value = record.get("correct")
    if not isinstance(value, bool):
        raise SchemaError("field 'correct' must be a boolean", line=line)
    return {
        "question_id": _str_field(record, "question_id", line),
        "model": _str_field(record, "model", line),
        "trial": _int_field(record, "trial", line),
        "correct": value,
    }


def trials_to_matrices(parsed: Iterable[dict]) -> list[TrialMatrix]:
    """Assemble per-model trial matrices, trials ordered by their index."""
    per_model: dict[str, dict[str, list[tuple[int, bool]]]] = {}
    model_order: list[str] = []
    question_order: dict[str, list[str]] = {}
    for rec in parsed:
        model = rec["model"]
        if model not in per_model:
            per_model[model] = {}
            question_order[model] = []
            model_order.append(model)
        rows = per_model[model]
        qid = rec["question_id"]
        if qid not in rows:
            rows[qid] = []
            question_order[model].append(qid)
        rows[qid].append((rec["trial"], rec["correct"]))
    matrices = []
    for model in model_order:
        qids = question_order[model]
        rows = []
        for qid in qids:
            trials = sorted(per_model[model][qid], key=lambda t: t[0])
            rows.append(tuple(v for _, v in trials))
        matrices.append(TrialMatrix(model, tuple(qids), tuple(rows)))
    return matrices
