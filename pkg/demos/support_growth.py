"""How many coupling entries does a solved pair actually use?

A coupling between n-node and m-node networks is a vertex of the
transport polytope when its support has at most n + m - 1 entries. The
sweep below solves random uniform pairs of growing size and reports the
median support: it grows linearly with n, not with the n*n entries the
matrix could fill.
"""
import numpy as np

from gwnet import support_size_sweep

rows = support_size_sweep(sizes=(5, 10, 20), trials=10, rng_seed=0)

for n in (5, 10, 20):
    sizes = [r["support_size"] for r in rows if r["n"] == n]
    print(f"n={n:>2}: median support {np.median(sizes):>5.1f} "
          f"(vertex bound {2 * n - 1}), ratio to 2n "
          f"{np.median(sizes) / (2 * n):.2f}")
