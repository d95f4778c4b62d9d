"""Generates data/reference_fronts/dascmop<k>_16.csv.

The feasible set at triplet 16 is a thin band around g = 0.5, so the front is
the image of the lowest feasible distance value over the position variables,
cut by the stripe and ellipse/sphere constraints, then filtered for
nondominance. Constraint checks use pymoo (importable from PYTHONPATH).

    PYTHONPATH=/path/to/pymoo python3 tools/make_reference_fronts.py data/reference_fronts
"""

import os
import sys

import numpy as np
from pymoo.problems.multi import dascmop

N_VAR = 30
G_TARGET = 0.5 - 0.99e-4


def tail_for_g(k, m, X):
    """Sets tail variables so that the problem's distance function is G_TARGET."""
    n_tail = N_VAR - m + 1
    step = np.sqrt(G_TARGET / n_tail)
    if k <= 3 or k == 9:
        if k <= 3:
            base = np.repeat(np.sin(0.5 * np.pi * X[:, 0:1]), n_tail, axis=1)
        else:
            j = np.arange(m - 1, N_VAR) + 1
            base = np.cos(0.25 * j / N_VAR * np.pi * (X[:, 0:1] + X[:, 1:2]))
        X[:, m - 1:] = np.where(base < 0.5, base + step, base - step)
    else:
        lo, hi = 0.0, 0.05
        target = G_TARGET / n_tail
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid ** 2 - np.cos(20 * np.pi * mid) + 1 < target:
                lo = mid
            else:
                hi = mid
        X[:, m - 1:] = 0.5 + lo
    return X


def nondominated(F):
    order = np.lexsort(F.T[::-1])
    F = F[order]
    keep = []
    for i, f in enumerate(F):
        if keep:
            K = F[keep]
            if np.any(np.all(K <= f, axis=1)):
                continue
        keep.append(i)
    return F[keep]


def thin(F, target):
    if len(F) <= target:
        return F
    idx = np.round(np.linspace(0, len(F) - 1, target)).astype(int)
    return F[np.unique(idx)]


def main(out_dir):
    os.makedirs(out_dir, exist_ok=True)
    for k in range(1, 10):
        problem = getattr(dascmop, f"DASCMOP{k}")(16)
        m = problem.n_obj
        if m == 2:
            grid = np.linspace(0.0, 1.0, 20001)
            X = np.zeros((len(grid), N_VAR))
            X[:, 0] = grid
        else:
            g = np.linspace(0.0, 1.0, 301)
            a, b = np.meshgrid(g, g, indexing="ij")
            X = np.zeros((a.size, N_VAR))
            X[:, 0] = a.ravel()
            X[:, 1] = b.ravel()
        X = tail_for_g(k, m, X)
        F, G = problem.evaluate(X, return_values_of=["F", "G"])
        F = F[np.all(G <= 0, axis=1)]
        if len(F) == 0:
            raise RuntimeError(f"DASCMOP{k}: no feasible front points")
        if m == 2:
            F = nondominated(F)
            F = thin(F, 1000)
        else:
            F = thin(nondominated(F), 2000)
        path = os.path.join(out_dir, f"dascmop{k}_16.csv")
        with open(path, "w") as fh:
            fh.write(",".join(f"f{i + 1}" for i in range(m)) + "\n")
            for row in F:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")
        print(path, len(F))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/reference_fronts")
