"""A two-sphere flow whose chain complex computes the wrong homology.

The bundled fig5 system lives on S^2: four sinks, two saddles, and one
repelling closed orbit.  Each closed orbit of index k contributes a
generator in degree k and another in degree k+1, with boundary coefficients
counting connecting flow lines mod 2.  The result is a genuine chain complex
(d squared is zero) — but its Betti numbers are (2, 1, 1), not the sphere's
(1, 0, 1).  Adding generators for orbits is not enough to recover the
homology of the underlying manifold.
"""

from msflow import betti, build_complex, check_d2, parse, rank
from msflow.cli import fixtures_dir

system = parse((fixtures_dir() / "fig5.msf").read_text())
complex_ = build_complex(system)

for k in range(complex_.top_degree, -1, -1):
    print(f"B_{k}:", [b.label for b in complex_.basis(k)])

print()
print("boundary in degree 2 (columns gamma+, rows s1 s2 gamma-):")
print(complex_.boundary(2).tolist())
print("boundary in degree 1 (columns s1 s2 gamma-, rows q1..q4):")
print(complex_.boundary(1).tolist())
print("rank of the degree-1 boundary:", rank(complex_.boundary(1)))

print()
print("d^2 violations:", check_d2(complex_) or "none")
print("computed Betti numbers:", betti(complex_))
print("declared (sphere) Betti numbers:", list(system.expected_betti))
