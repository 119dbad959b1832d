"""Size of the proven degree bound: exact for n = 1, logarithms beyond."""

from diffgalois.pipeline import theoretical_bound

for n in (1, 2, 3):
    res = theoretical_bound(n)
    s = res.summary()
    print(f"n = {n}: log2 I(n) = {s['log2_I(n)']:.6g}, log2 kappa3 = {s['log2_kappa3']:.6g}, "
          f"log2 log2 d = {s['log2_log2_d']:.6g}")
    if n == 1:
        print(f"   I(1) = {res.I_n}, kappa3 = {res.kappa3}")
    if res.value is not None:
        print(f"   d has {s['d_bits']} bits; d mod 1e9+7 = {s['d_mod_1000000007']}")
