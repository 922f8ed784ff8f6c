"""Is the gradient-like replacement of a flow unique?  Count the classes.

Resolving every closed orbit in every admissible way yields a family of
gradient-like systems.  Grouping them by face-poset isomorphism answers the
uniqueness question structurally: one class means every choice leads to the
same cell structure, several classes mean the choice genuinely matters.

Both bundled sphere systems come out non-unique.  On fig4 the bundled
variants split exactly as the sink-saddle incidence counts say they must:
(1,2,3,4) for two of them, (1,3,3,3) for the third.
"""

from msflow import cell_equivalence_verdict, census, parse
from msflow.cli import fixtures_dir


def load(name):
    return parse((fixtures_dir() / name).read_text())


for fixture in ("fig3.msf", "fig4.msf"):
    system = load(fixture)
    report = census(system)
    print(f"{system.label}: {report.total} resolutions in {len(report.classes)} classes")
    for i, cls in enumerate(report.classes, start=1):
        q_outs = [dict(choices[0].q_out) for choices in cls.members]
        print(f"  class {i}: {q_outs}")
    print()

# The same conclusion, pairwise: the first two explicit variants pass every
# necessary condition for cell equivalence, the third is certified different.
x1, x2, x3 = load("fig4-X1.msf"), load("fig4-X2.msf"), load("fig4-X3.msf")
for a, b in ((x1, x2), (x1, x3)):
    verdict = cell_equivalence_verdict(a, b)
    print(f"{a.label} vs {b.label}: {verdict.summary}")
    if verdict.certificate:
        print("  certificate:", verdict.certificate)
