"""How different are a question's candidate solutions?

Walks the full metric stack on a toy solution set: pairwise normalized edit
distance, the similarity relation graph, its Laplacian spectrum under both
degree conventions, and the global/local divergence values.
"""

import numpy as np

from divkit import (
    Convention,
    Solution,
    SolutionSet,
    divergence_global,
    divergence_local,
    divergence_matrix,
    divergence_report,
    laplacian_spectrum,
    oversample,
    relation_graph,
)

solutions = SolutionSet(
    "hexagon-perimeter",
    (
        Solution("a", "Step 1. side = 21/3 = 7. Step 2. perimeter = 6*7 = 42.", True),
        Solution("b", "Step 1. side = 21/3 = 7. Step 2. perimeter = 6*7 = 42.", True),
        Solution("c", "Step 1. hexagon = 6 triangle sides. Step 2. 2*21 = 42.", True),
        Solution("d", "Step 1. p = 21 * 6 / 3. Step 2. p = 42.", True),
    ),
)

delta = divergence_matrix(solutions)
print("pairwise divergence (normalized edit distance):")
print(np.array_str(delta, precision=3))

graph = relation_graph(delta, Convention.STANDARD)
print("\nLaplacian spectrum, standard convention:", np.round(laplacian_spectrum(graph), 4))
shifted = relation_graph(delta, Convention.SELF_LOOP)
print("Laplacian spectrum, self-loop convention:", np.round(laplacian_spectrum(shifted), 4))

print("\nglobal divergence (closed form):", round(divergence_global(solutions), 4))
print("local divergence (Fiedler-based):", round(divergence_local(solutions), 4))

report = divergence_report(solutions, Convention.SELF_LOOP)
print(
    "\nself-loop spectral global value matches the closed form:",
    round(report.zeta_global_spectral, 12),
    "==",
    round(report.zeta_global, 12),
)

# duplicates change nothing pairwise but grow the set, so the closed form
# scales linearly with exact duplication
doubled = oversample(solutions, 8, exact=True)
print("\nafter exact 2x oversampling:", round(divergence_global(doubled), 4), "(doubles)")
