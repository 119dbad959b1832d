"""Walk through every stage for sigma(Y) = A Y with

    A = [[0, 1, 0], [x, 0, 0], [0, 0, 1/x]].

The group has two components, the torus {diag(a, b, c) : abc = 1} and its
coset of anti-diagonal blocks.
"""

from diffgalois import DifferenceSystem
from diffgalois.pipeline import compute_galois_group, sample_points

S = DifferenceSystem.parse([["0", "1", "0"], ["x", "0", "0"], ["0", "0", "1/x"]])
out = compute_galois_group(S, d=2, ell=0)

for step in out.transcript:
    if step["step"] == "bound":
        continue
    print(f"--- {step['step']} ({step['seconds']}s)")
    result = step["result"]
    if step["step"] == "hyper":
        for h in result:
            print(f"  sigma^{h['delta']}({h['element']}) = ({h['certificate']}) * {h['element']}")
    elif step["step"] == "lattice":
        print("  basis:", result["basis"], "witnesses:", result["witnesses"])
    elif step["step"] == "decompose":
        print("  period:", step["delta"])
        for comp in result:
            print("  ", comp)
    else:
        for g in result:
            print("  ", g)

print("--- components of the group")
for comp in out.components:
    print("  ", comp.ideal)
    g = sample_points(comp.ideal, 1, seed=1)[0]
    rows = [" ".join(f"{str(v):>5}" for v in g[i * 3:(i + 1) * 3]) for i in range(3)]
    print("   sample element:", " | ".join(rows))
