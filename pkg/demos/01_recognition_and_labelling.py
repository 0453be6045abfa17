"""Recognising orchard networks and reading them as trees plus horizontal arcs.

A network is orchard when repeatedly picking cherries and reticulated
cherries empties it down to a single leaf. Equivalently (for binary
networks), its nodes admit time labels under which every reticulation is
contemporaneous with exactly one parent: the network is then a tree with
horizontal transfer arcs drawn in, and deleting those arcs exposes the tree.
"""

from orchardkit import (base_tree, construct, find_crown, is_orchard, parse,
                        reticulation_number, validate, verify, write)

# Thirteen gamma-proteobacteria taxa with two horizontal transfer events.
PROTEO = ("((13,(11,12)),(((((7,8),(9)#H2),(((5,6),((1,2),(3,4))),"
          "(10)#H1)),#H2),#H1));")

net = parse(PROTEO)
print("network:", write(net))
print("valid:", validate(net).ok, "| reticulations:", reticulation_number(net))

sequence = is_orchard(net)
print("\norchard: yes, reduced by", len(sequence), "cherry picks:")
print("  " + " ".join(f"({x},{y})" for x, y in sequence))

labelling = construct(net)
print("\nHGT-consistent labelling verifies:", verify(net, labelling).ok)
ties = labelling.tied_pairs()
print("contemporaneous pairs (one per transfer):", ties)

tree = base_tree(net, labelling)
print("\nbase tree after deleting horizontal arcs:")
print("  " + write(tree))

# A network that is NOT orchard: two tree nodes feeding the same two
# reticulations form a crown, which no time labelling can linearise.
crown = parse("(((a)#H1,(b)#H2),(#H1,#H2));")
print("\ncrown network:", write(crown))
print("orchard:", is_orchard(crown) is not None,
      "| crown witness nodes:", find_crown(crown))
