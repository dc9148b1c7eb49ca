"""Building high/low-divergence training splits and auditing greedy edits."""

from divkit import (
    CandidatePool,
    Solution,
    SolutionSet,
    build_sft_splits,
    divergence_global,
    greedy_update,
    select_extremal_subsets,
)

candidates = tuple(
    Solution(f"c{i}", text, True)
    for i, text in enumerate(
        [
            "add the sides then multiply",
            "add the sides then multiply",
            "multiply one side by six",
            "scale the triangle perimeter by two",
            "area-free: 6 * (21 / 3)",
            "double 21 because 6/3 = 2",
        ]
    )
)
pool = CandidatePool("hexagon", candidates, k=4)
result = select_extremal_subsets(pool)
print(f"examined {result.subsets_examined} subsets")
print("most divergent:", result.plus_ids, "zeta =", round(result.plus_zeta, 4))
print("least divergent:", result.minus_ids, "zeta =", round(result.minus_zeta, 4))

plus, minus = build_sft_splits([pool])
print(f"\nsplit streams: {len(plus)} plus records, {len(minus)} minus records")

# greedy accept/reject: edits land only when they strictly raise divergence
state = SolutionSet("hexagon", candidates[:2])
print("\nstarting zeta:", divergence_global(state))
for step, edit in enumerate(
    [
        Solution("n0", "multiply one side by six", True),
        Solution("n1", "add the sides then multiply", True),  # near-duplicate
        Solution("n2", "completely different geometric argument", True),
    ]
):
    decision = greedy_update(state, add=edit)
    state = decision.result
    print(
        f"add {edit.id}: {'accept' if decision.accepted else 'reject'}"
        f" ({decision.zeta_before:.4f} -> {decision.zeta_after:.4f})"
    )
print("final set size:", len(state), "final zeta:", round(divergence_global(state), 4))
