"""The cyclic system A = [[0, 1, 0], [0, 0, 1], [x, 0, 0]].

The relations of degree 2 are 27 products of entries; the ideal splits into
three coordinate subspaces permuted by the shift, so each is stable under
sigma^3.  The three linear elements have certificates x, x+1, x+2, which
admit no multiplicative relation, so the group is the full diagonal torus
together with its two cyclic-permutation cosets.
"""

from diffgalois import DifferenceSystem
from diffgalois.pipeline import compute_galois_group

S = DifferenceSystem.parse([["0", "1", "0"], ["0", "0", "1"], ["x", "0", "0"]])
out = compute_galois_group(S, d=2, ell=0)
steps = {s["step"]: s for s in out.transcript}
print(len(steps["relations"]["result"]), "relations of degree 2")
print("components:", steps["decompose"]["result"], "period", steps["decompose"]["delta"])
for h in steps["hyper"]["result"]:
    print(f"sigma^3({h['element']}) = ({h['certificate']}) * {h['element']}")
print("lattice basis:", steps["lattice"]["result"]["basis"])
for comp in out.components:
    print("group component:", comp.ideal)
