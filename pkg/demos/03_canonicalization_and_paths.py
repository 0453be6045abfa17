"""Canonicalising orchard networks and building explicit rNNI paths.

Canonicalisation pushes every reticulation onto a stack directly below the
root, orients all horizontal arcs the same way with a chosen leaf below the
lowest head, and costs at most 2kn + k + 2n - 4 moves. Two canonicalised
networks differ only in a pendant tree, so reversing one trace through the
other yields an explicit all-orchard path between any two networks with the
same taxa and reticulation number.
"""

from orchardkit import (apply_rnni, canonicalize, detect_top, is_orchard,
                        orchard_path, random_orchard, verify, write)

net = random_orchard(6, 2, seed=20240)
n, k = 6, 2
print("start:", write(net))
print("reticulations at the top initially:", detect_top(net).k)

trace = canonicalize(net, leaf="x1")
bound = 2 * k * n + k + 2 * n - 4
print(f"\ncanonicalised in {len(trace)} moves (bound {bound}):")
print("  " + write(trace.result))
top = detect_top(trace.result)
print("stack size:", top.k, "| aligned:", top.neat)

print("\nevery intermediate is a verified orchard network:")
ok = all(verify(after, lab).ok and is_orchard(after) is not None
         for after, lab in zip(trace.networks, trace.labellings))
print("  all", len(trace), "steps check out:", ok)

other = random_orchard(6, 2, seed=77)
print("\nconnecting to a second network:", write(other))
path = orchard_path(net, other)
print(f"path of {len(path)} rNNI moves; replaying it:")
cur = path.start
for move in path.moves:
    cur = apply_rnni(cur, move)
print("  arrives at:", write(cur))
