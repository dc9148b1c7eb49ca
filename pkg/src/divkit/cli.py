"""divkit command line: maze data, divergence reports, curation, scoring.

Every command is deterministic given its inputs, seed, and flags; outputs are
canonical JSONL so reruns (and any worker-thread count) are byte-identical.
Exit codes: 0 success, 1 domain error, 2 input/schema error.

Environment: DIVKIT_SEED overrides any --seed flag, DIVKIT_THREADS caps the
per-question worker pool.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import analysis as an
from . import curation, divergence, jsonio, maze, reward
from .divergence import Convention
from .errors import DivkitError, DomainError, SchemaError


@dataclass(frozen=True)
class PipelineConfig:
    """Shared defaults across the pipeline.

    group_size is the RL generation-group size, alpha the reward scaling
    exponent, epsilon the objective clip radius, subset_k the curation
    subset size.  sample_n is the per-question path-sampling count used to
    stand in for a generator when building maze datasets.
    """

    seed: int = 0
    group_size: int = 8
    alpha: float = 4.0
    epsilon: float = 0.2
    subset_k: int = 4
    sample_n: int = 10
    convention: Convention = Convention.STANDARD


DEFAULTS = PipelineConfig()


def thread_count() -> int:
    env = os.environ.get("DIVKIT_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def parallel_map(fn, items):
    """Order-preserving map over questions, bounded by DIVKIT_THREADS."""
    items = list(items)
    workers = thread_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _read_records(path: str) -> list[tuple[int, dict]]:
    with open(path, "r", encoding="utf-8") as fh:
        return list(jsonio.read_jsonl(fh))


def _read_solution_sets(path: str):
    parsed = [jsonio.parse_solution_record(rec, line) for line, rec in _read_records(path)]
    return jsonio.group_solutions(parsed)


def cmd_maze_gen(args) -> None:
    records = []
    for i in range(args.n):
        spec = maze.generate_maze(
            block_count=args.blocks,
            grid_max=args.grid,
            require_solvable=args.solvable,
            seed=args.seed + i,
        )
        records.append(jsonio.maze_to_record(f"maze-{args.seed + i:08d}", spec))
    jsonio.write_jsonl(args.output, records)


def cmd_maze_sample(args) -> None:
    mazes = [jsonio.parse_maze_record(rec, line) for line, rec in _read_records(args.mazes)]

    def sample(entry):
        maze_id, spec = entry
        paths = maze.sample_paths(spec, args.n, seed=args.seed)
        return [
            jsonio.path_answer_record(f"{maze_id}/{i}", maze.render_path(p))
            for i, p in enumerate(paths)
        ]

    records = [rec for batch in parallel_map(sample, mazes) for rec in batch]
    jsonio.write_jsonl(args.output, records)


def cmd_maze_verify(args) -> None:
    specs = dict(jsonio.parse_maze_record(rec, line) for line, rec in _read_records(args.mazes))
    answers = []
    for line, rec in _read_records(args.answers):
        answer_id, answer = jsonio.parse_path_record(rec, line)
        maze_id = answer_id.rsplit("/", 1)[0]
        if maze_id not in specs:
            raise SchemaError(f"answer {answer_id!r} references unknown maze", line=line)
        answers.append((answer_id, maze_id, answer))

    def verify(entry):
        answer_id, maze_id, answer = entry
        verdict = maze.verify_path(specs[maze_id], maze.parse_path(answer))
        return {
            "v": jsonio.SCHEMA_VERSION,
            "question_id": maze_id,
            "solution_id": answer_id,
            "text": answer,
            "correct": verdict.valid,
            "reason": verdict.failure_reason.value,
        }

    jsonio.write_jsonl(args.output, parallel_map(verify, answers))


def cmd_group(args) -> None:
    records = [
        jsonio.set_to_group_record(solution_set)
        for _, solution_set in _read_solution_sets(args.solutions)
    ]
    jsonio.write_jsonl(args.output, records)


def cmd_divergence(args) -> None:
    convention = Convention(args.convention)
    sets = _read_solution_sets(args.solutions)

    def report(entry):
        model, solution_set = entry
        rep = divergence.divergence_report(solution_set, convention)
        return jsonio.report_to_record(solution_set.question_id, rep, model=model)

    jsonio.write_jsonl(args.output, parallel_map(report, sets))


def cmd_select(args) -> None:
    pools = []
    too_small = []
    for _, solution_set in _read_solution_sets(args.solutions):
        candidates = tuple(s for s in solution_set.solutions if s.correct)
        if len(candidates) < args.k:
            too_small.append(f"{solution_set.question_id} ({len(candidates)} < {args.k})")
            continue
        pools.append(curation.CandidatePool(solution_set.question_id, candidates, k=args.k))
    if too_small:
        raise DomainError("pools below subset size: " + ", ".join(too_small))
    results = parallel_map(curation.select_extremal_subsets, pools)
    plus, minus = [], []
    for pool, result in zip(pools, results):
        by_id = {s.id: s for s in pool.candidates}
        for split, ids, bucket in (("plus", result.plus_ids, plus), ("minus", result.minus_ids, minus)):
            for sid in ids:
                bucket.append(
                    {
                        "v": jsonio.SCHEMA_VERSION,
                        "question_id": pool.question_id,
                        "solution_id": sid,
                        "text": by_id[sid].text,
                        "correct": True,
                        "split": split,
                    }
                )
    jsonio.write_jsonl(args.plus, plus)
    jsonio.write_jsonl(args.minus, minus)


def _score_group(solution_set, alpha: float, mode: str) -> reward.GroupScore:
    if mode == "binary":
        return reward.binary_group_rewards(solution_set)
    config = reward.RewardConfig(alpha=alpha)
    return reward.group_rewards(solution_set, config=config)


def cmd_reward_score(args) -> None:
    sets = [jsonio.parse_group_record(rec, line) for line, rec in _read_records(args.groups)]

    def score(solution_set):
        result = _score_group(solution_set, args.alpha, args.mode)
        return jsonio.score_to_record(solution_set.question_id, result)

    jsonio.write_jsonl(args.output, parallel_map(score, sets))


def cmd_analyze(args) -> None:
    trials = [jsonio.parse_trial_record(rec, line) for line, rec in _read_records(args.trials)]
    if not trials:
        raise DomainError("no trial records")
    matrices = jsonio.trials_to_matrices(trials)

    zeta_by_model: dict[str | None, dict[str, float]] = {}
    for line, rec in _read_records(args.reports):
        model = rec.get("model")
        if model is not None and not isinstance(model, str):
            raise SchemaError("field 'model' must be a string", line=line)
        qid = rec.get("question_id")
        zeta = rec.get("zeta_global")
        if not isinstance(qid, str) or isinstance(zeta, bool) or not isinstance(zeta, (int, float)):
            raise SchemaError("report needs question_id and numeric zeta_global", line=line)
        zeta_by_model.setdefault(model, {})[qid] = float(zeta)

    # the question universe spans both inputs: divergence-half questions
    # usually carry no evaluation trials and vice versa
    question_ids = sorted(
        {rec["question_id"] for rec in trials}
        | {qid for per_question in zeta_by_model.values() for qid in per_question}
    )
    shuffled = question_ids[:]
    random.Random(args.seed).shuffle(shuffled)
    div_half = sorted(shuffled[: len(shuffled) // 2])
    eval_half = sorted(shuffled[len(shuffled) // 2 :])

    models = []
    for matrix in matrices:
        per_question = zeta_by_model.get(matrix.model_id, zeta_by_model.get(None, {}))
        model_div = divergence.model_divergence(
            {qid: per_question.get(qid) for qid in div_half},
            zero_fill=True,
            model_id=matrix.model_id,
        )
        models.append((model_div, matrix))
    rows = an.divergence_performance_table(
        models, div_half, eval_half, k=args.k, estimator=args.estimator
    )

    fit = None
    zetas = [r.zeta for r in rows]
    if len(rows) >= 2 and len(set(zetas)) > 1:
        f = an.fit_line(zetas, [r.pass_rate for r in rows])
        fit = {"slope": f.slope, "intercept": f.intercept, "r_squared": f.r_squared}

    rates: dict[str, list[bool]] = {}
    for rec in trials:
        rates.setdefault(rec["question_id"], []).append(rec["correct"])
    mean_rates = {qid: sum(v) / len(v) for qid, v in rates.items()}
    buckets = None
    if len(mean_rates) >= 3:
        b = an.bucket_by_difficulty(mean_rates)
        buckets = {
            "easy": sorted(b.easy),
            "medium": sorted(b.medium),
            "hard": sorted(b.hard),
            "thresholds": [b.thresholds[0], b.thresholds[1]],
        }

    result = {
        "v": jsonio.SCHEMA_VERSION,
        "k": args.k,
        "divergence_half": div_half,
        "evaluation_half": eval_half,
        "rows": [
            {"model": r.model_id, "zeta": r.zeta, "pass_at_k": r.pass_rate} for r in rows
        ],
        "fit": fit,
        "buckets": buckets,
    }
    Path(args.output).write_text(jsonio.dumps_canonical(result) + "\n", encoding="utf-8")
    if args.csv:
        lines = ["model,zeta,pass_at_k"]
        lines += [
            f"{r.model_id},{jsonio.format_real(r.zeta)},{jsonio.format_real(r.pass_rate)}"
            for r in rows
        ]
        Path(args.csv).write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_serve(args) -> None:
    import uvicorn

    from .service import create_app

    app = create_app()
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="divkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("maze-gen", help="generate maze instances")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--grid", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-solvable", dest="solvable", action="store_false")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_maze_gen)

    p = sub.add_parser("maze-sample", help="sample viable paths per maze")
    p.add_argument("--mazes", required=True)
    p.add_argument("--n", type=int, default=DEFAULTS.sample_n)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_maze_sample)

    p = sub.add_parser("maze-verify", help="verify claimed answers against mazes")
    p.add_argument("--mazes", required=True)
    p.add_argument("--answers", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_maze_verify)

    p = sub.add_parser("group", help="fold flat solution records into group records")
    p.add_argument("--solutions", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("divergence", help="per-question divergence reports")
    p.add_argument("--solutions", required=True)
    p.add_argument(
        "--convention",
        choices=[c.value for c in Convention],
        default=Convention.STANDARD.value,
    )
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_divergence)

    p = sub.add_parser("select", help="extremal k-subset curation per question")
    p.add_argument("--solutions", required=True)
    p.add_argument("--k", type=int, default=DEFAULTS.subset_k)
    p.add_argument("--plus", required=True)
    p.add_argument("--minus", required=True)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("reward-score", help="score generation groups")
    p.add_argument("--groups", required=True)
    p.add_argument("--alpha", type=float, default=DEFAULTS.alpha)
    p.add_argument("--mode", choices=["fused", "binary"], default="fused")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_reward_score)

    p = sub.add_parser("analyze", help="pass@k vs divergence analysis")
    p.add_argument("--trials", required=True)
    p.add_argument("--reports", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--estimator", action="store_true")
    p.add_argument("--seed", type=int, default=0, help="question half-split seed")
    p.add_argument("--csv", default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("serve", help="run the scoring service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8321)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    seed_override = os.environ.get("DIVKIT_SEED")
    if seed_override is not None and hasattr(args, "seed"):
        args.seed = int(seed_override)
    try:
        args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DivkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
