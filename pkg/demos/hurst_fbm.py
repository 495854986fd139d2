"""
Hurst accuracy on fractional Gaussian noise.

A small ensemble per input exponent, centred windows. The direct estimator's
h(q) is backed out of tau(q). Raise ``RUNS`` to 100 for the full study.
"""

import numpy as np

from mfdma import hurst_bench

RUNS = 10
out = hurst_bench((0.3, 0.5, 0.7), n_runs=RUNS, n=65536, theta=0.5, seed=0)
q = out["q"]
pick = [np.flatnonzero(q == v)[0] for v in (-4, -2, 0, 2, 4)]
for H in (0.3, 0.5, 0.7):
    for a in ("traditional", "direct"):
        st = out[H][a]
        cells = "  ".join(f"q={q[i]:+.0f}: {st['mean'][i]:.3f}±{st['std'][i]:.3f}" for i in pick)
        print(f"H={H} {a:>11}  {cells}")
