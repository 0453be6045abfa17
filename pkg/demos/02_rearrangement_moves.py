"""rNNI moves: local rearrangements that walk through network space.

A move detaches a degree-3 node from its parent and one child and reinserts
it into a nearby arc. Both the "head" variant (the node is a reticulation)
and the "tail" variant (a tree node) preserve every degree, so validity is
just acyclicity plus no parallel arcs.
"""

from orchardkit import (apply_rnni, inverse, is_orchard, parse,
                        rnni_neighbors, write)

net = parse("((a)#H1,((#H1,b),c));")
print("start:", write(net))
print("orchard:", is_orchard(net) is not None)

neighbors = rnni_neighbors(net)
print(f"\n{len(neighbors)} distinct rNNI neighbours:")
for move, result in neighbors:
    tag = "orchard" if is_orchard(result) is not None else "not orchard"
    print(f"  {move}  ->  {write(result)}  [{tag}]")

orchard_only = rnni_neighbors(net, orchard_only=True)
print(f"\n{len(orchard_only)} of them stay orchard")

move, result = neighbors[0]
undo = inverse(move, net)
print("\nfirst move:", move)
print("its inverse:", undo)
print("round trip restores the start:", apply_rnni(result, undo) == net)
