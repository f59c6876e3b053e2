#!/usr/bin/env python3
"""Sweep the sigma- and Carleman-representation evaluators over random
points and print the worst relative disagreement for each (gamma, s)."""

import argparse
import time

import numpy as np

from boltzlab.carleman import AnnularScheme, PlaneQuadrature, eval_Q
from boltzlab.grid import Gaussian
from boltzlab.kernel import KernelParams
from boltzlab.sigma import eval_Q_sigma

SIGMA_KW = dict(n_r=24, n_sphere=(16, 18), n_phi=8)
CARLEMAN_KW = dict(scheme=AnnularScheme(n_gl=7), n_sphere=(16, 16),
                   pq=PlaneQuadrature(16, 26, 7))


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-points", type=int, default=10)
    ap.add_argument("--seed", type=int, default=20260826)
    args = ap.parse_args()

    f1 = Gaussian(1.0, 1.0, center=np.array([0.6, 0.0, 0.0]))
    f2 = Gaussian(0.8, 1.3, center=np.array([-0.4, 0.3, 0.0]))
    for gamma, s in [(-0.5, 0.25), (-1.0, 0.5), (-0.5, 0.75)]:
        params = KernelParams(gamma=gamma, s=s)
        rng = np.random.default_rng(args.seed)
        pts = rng.normal(0.0, 1.0, (args.n_points, 3))
        t0 = time.time()
        q_c = np.array([eval_Q(f1, f2, v, params, **CARLEMAN_KW)
                        for v in pts])
        q_s = np.array([eval_Q_sigma(f1, f2, v, params, **SIGMA_KW)
                        for v in pts])
        rel = np.max(np.abs(q_c - q_s)) / np.max(np.abs(q_c))
        print(f"gamma={gamma:5.2f} s={s:4.2f}  worst rel diff {rel:.3e}  "
              f"({time.time() - t0:.1f} s)")


if __name__ == "__main__":
    main()
