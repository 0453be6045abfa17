"""Exhaustively mapping a small orchard network space.

Vertices come from exhaustive reverse cherry picking (every network, up to
isomorphism); edges are single rNNI moves between orchard networks. BFS
then gives exact connectivity and diameter to compare against the proved
bound 4kn + n*ceil(log2 n) + 2k + 6n - 8.
"""

from orchardkit import (audit_paths, build_space, diameter,
                        diameter_upper_bound, is_connected, write)
from orchardkit.space_explorer import dump_space

for n, k in [(2, 1), (2, 2), (3, 1)]:
    space = build_space(n, k)
    edges = sum(len(v) for v in space.edges.values()) // 2
    print(f"orchard space ({n} leaves, {k} reticulations): "
          f"{len(space.vertices)} networks, {edges} edges")
    print("  connected:", is_connected(space),
          "| diameter:", diameter(space),
          "| bound:", diameter_upper_bound(n, k))

space = build_space(2, 1)
print("\nthe two networks of the smallest non-trivial space:")
for net in space.vertices.values():
    print("  " + write(net))

report = audit_paths(space, trials=10, seed=0)
print("\nconstructed paths audited against BFS distances:",
      "all good" if report.ok else report.failures)
print("longest constructed path:", report.max_constructed_length,
      "| largest BFS distance:", report.max_bfs_distance)

print("\nspace dump (edge list + manifest):")
print(dump_space(space))
