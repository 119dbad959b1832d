"""Fibonacci: linear relations, then the group with degree-2 characters.

With linear characters only, the pipeline sees the two relations
y21 = y12 and y22 = y11 + y12, so the answer is the commutant of the
Fibonacci matrix.  Allowing degree-2 characters finds det(Y), whose
certificate -1 is a shift quotient only for even powers, which cuts the
group down to det(g)^2 = 1.
"""

from diffgalois import DifferenceSystem
from diffgalois.pipeline import compute_galois_group

S = DifferenceSystem.parse([["0", "1"], ["1", "1"]])

for char_degree in (1, 2):
    out = compute_galois_group(S, d=2, ell=0, char_degree=char_degree)
    steps = {s["step"]: s for s in out.transcript}
    print(f"=== characters of degree <= {char_degree}")
    print("relations:", steps["relations"]["result"])
    print("elements: ", [(h["element"], h["certificate"]) for h in steps["hyper"]["result"]])
    print("lattice:  ", steps["lattice"]["result"]["basis"])
    print("group:    ", out.stabilizer_ideal)
    for comp in out.components:
        print("  component:", comp)
