"""Describing a flow combinatorially and checking it makes sense.

A system is a manifold dimension, a list of critical elements (rest points
and closed orbits with their indices), and integer connection counts between
them.  The .msf text format carries exactly that.  The validator enforces
what transversality forces: the dimension rule u + s >= n + 1, no flow into
repellers or out of attractors, and an acyclic connection digraph.
"""

from msflow import parse, serialize, validate

TEXT = """\
dim 2
label demo-sphere
rest q0 0
rest q1 0
rest s 1
rest p 2
conn s q0 1
conn s q1 1
conn p s 2
conn p q0 1
conn p q1 1
"""

system = parse(TEXT)
print("parsed:", system.label, "-", len(system.elements), "elements,", len(system.connections), "connections")

violations = validate(system)
print("violations:", violations or "none")

# strict mode additionally demands each 2D saddle has exactly two outgoing
# and two incoming separatrices (counted with multiplicity)
print("strict violations:", validate(system, strict=True) or "none")

# Serialization is deterministic: declaration order for elements, sorted
# connection lines, so identical systems produce identical bytes.
print()
print(serialize(system), end="")

# The validator reports problems as data instead of raising, so a broken
# file can be loaded and diagnosed.
broken = parse("dim 2\nrest a 1\nrest b 1\norbit g 1 untwisted\nconn a b 1\nconn b g 2\n")
print()
for v in validate(broken):
    print(v)
