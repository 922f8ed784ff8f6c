"""A three-sphere flow where the construction is not a chain complex at all.

The bundled fig6 system lives on S^3 with an attracting closed orbit of
index 0 sitting below three index-2 rest points.  Composing the degree-3 and
degree-2 boundaries leaves a nonzero row: the two generators r1, r2 both hit
the orbit's upper copy gamma+.  Homology is undefined here, and the tools
refuse to pretend otherwise.
"""

from msflow import D2Error, betti, build_complex, check_d2, multiply, parse
from msflow.cli import fixtures_dir

system = parse((fixtures_dir() / "fig6.msf").read_text())
complex_ = build_complex(system)

print("boundary in degree 3:", complex_.boundary(3).tolist())
print("boundary in degree 2:", complex_.boundary(2).tolist())
print("their product:        ", multiply(complex_.boundary(2), complex_.boundary(3)).tolist())

print()
for violation in check_d2(complex_):
    print(violation)

print()
try:
    betti(complex_)
except D2Error as exc:
    print("betti refused:", exc)
