"""Divergence-fused rewards for one RL generation group.

A correct solution is paid by how different it is from the other correct
solutions, scaled by the group success ratio to the alpha.  Incorrect ones
pay a flat -1.  Group-relative advantages standardize the rewards, and the
clipped token objective turns them into a scalar training signal.
"""

from divkit import (
    ObjectiveConfig,
    RewardConfig,
    Solution,
    SolutionSet,
    TokenBatch,
    advantages,
    binary_group_rewards,
    group_rewards,
    token_objective,
)

group = SolutionSet(
    "maze-042",
    (
        Solution("g0", "s→r→r→u→u→e", True),
        Solution("g1", "s→u→u→r→r→e", True),
        Solution("g2", "s→r→u→r→u→e", True),
        Solution("g3", "s→r→r→r→u→e", False),  # wrong endpoint
    ),
)

for alpha in (2, 3, 4):
    score = group_rewards(group, config=RewardConfig(alpha=alpha))
    print(f"alpha={alpha}: rewards={[round(r, 4) for r in score.per_solution]}"
          f" total={score.total:.4f}")

score = group_rewards(group, config=RewardConfig(alpha=4))
print("\nadvantages:", [round(a, 4) for a in score.advantages])
print("binary baseline:", binary_group_rewards(group).per_solution)

# token-level objective: probabilities for three short solutions under the
# current and the frozen sampling policy, advantages broadcast per solution
batch = TokenBatch(
    current=((0.5, 0.6, 0.55), (0.3, 0.8), (0.45,)),
    old=((0.5, 0.5, 0.5), (0.3, 0.8), (0.9,)),
    advantages=tuple(score.advantages[:3]),
)
print("clipped token objective:", round(token_objective(batch, ObjectiveConfig(epsilon=0.2)), 6))

print("\nadvantages of a pure reward vector:", [round(float(a), 4) for a in advantages([2.0, 0.0, -2.0])])
