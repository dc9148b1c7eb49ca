"""Relating per-model divergence to pass@k on held-out questions.

Synthesizes trial data for four mock models whose first-attempt success
tracks their divergence, splits questions into disjoint halves, and fits the
divergence-vs-performance line.  Also shows difficulty bucketing.
"""

import random

from divkit import (
    TrialMatrix,
    bucket_by_difficulty,
    divergence_performance_table,
    fit_line,
    model_divergence,
    pass_at_k,
)

rng = random.Random(0)
div_half = [f"q{i:02d}" for i in range(10)]
eval_half = [f"q{i:02d}" for i in range(10, 20)]

models = []
for m, skill in enumerate((0.2, 0.4, 0.6, 0.8)):
    zeta = model_divergence({q: 3.0 * skill for q in div_half}, model_id=f"model-{m}")
    rows = tuple(
        tuple(rng.random() < skill for _ in range(10)) for _ in eval_half
    )
    models.append((zeta, TrialMatrix(f"model-{m}", tuple(eval_half), rows)))

rows = divergence_performance_table(models, div_half, eval_half, k=1)
for row in rows:
    print(f"{row.model_id}: zeta={row.zeta:.3f} pass@1={row.pass_rate:.3f}")

fit = fit_line([r.zeta for r in rows], [r.pass_rate for r in rows])
print(f"\nfit: slope={fit.slope:.4f} intercept={fit.intercept:.4f} R^2={fit.r_squared:.4f}")

print("\npass@k grows with k for the strongest model:")
strongest = models[-1][1]
for k in (1, 2, 5, 10):
    print(f"  pass@{k} = {pass_at_k(strongest, k):.3f}"
          f" (estimator {pass_at_k(strongest, k, estimator=True):.3f})")

rates = {q: rng.random() for q in div_half + eval_half}
buckets = bucket_by_difficulty(rates)
print(
    f"\ndifficulty buckets: {len(buckets.easy)} easy, {len(buckets.medium)} medium,"
    f" {len(buckets.hard)} hard (thresholds {buckets.thresholds[0]:.3f}/{buckets.thresholds[1]:.3f})"
)
