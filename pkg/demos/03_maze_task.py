"""The maze logical-reasoning task end to end.

Generates a solvable instance on the 0..10 lattice, counts and enumerates
its viable right/up paths exactly, samples solutions uniformly, and verifies
answers written in the boxed arrow syntax.
"""

from divkit import (
    MazeSpec,
    count_paths,
    enumerate_paths,
    generate_maze,
    parse_path,
    render_path,
    sample_paths,
    verify_path,
)

spec = generate_maze(block_count=12, grid_max=10, seed=7)
print(f"target {spec.target}, {len(spec.blocked)} blocked cells, seed {spec.seed}")
print("viable paths:", count_paths(spec))

paths = sample_paths(spec, 5, seed=1)
for p in paths:
    print(" ", render_path(p), "->", verify_path(spec, p).valid)

# the worked instance from the task description
table1 = MazeSpec(target=(8, 4), blocked=frozenset({(1, 1), (3, 4), (6, 2)}))
print("\nworked instance: target (8,4), blocked (1,1) (3,4) (6,2)")
print("viable paths:", count_paths(table1))

answer = parse_path("s→r→r→r→r→r→r→r→r→u→u→u→u→e")
print("straight-line answer valid:", verify_path(table1, answer).valid)

bad = parse_path("s→r→u→r→u→r→u→r→u→r→r→r→e")
verdict = verify_path(table1, bad)
print("staircase answer:", verdict.valid, verdict.failure_reason.value)

# a tiny unsolvable instance accepts exactly the no-path claim
walled = MazeSpec(target=(1, 1), blocked=frozenset({(0, 1), (1, 0)}), grid_max=2)
print("\nwalled-in corner, claims-no-path verdict:",
      verify_path(walled, parse_path("×")).valid)

small = MazeSpec(target=(2, 2), grid_max=2)
print("all paths to (2,2):", [render_path(p) for p in enumerate_paths(small)])
