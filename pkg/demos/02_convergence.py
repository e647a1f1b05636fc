"""
Convergence of the alternating solver
=====================================

The secrecy-rate maximizer alternates a GPI update of the AN projection
with a generalized-eigenvector update of the precoder. Each half-step can
only raise the secrecy rate. Here we compare the leakage starting point
with random ones at 10 dB.
"""

import numpy as np

from dmsecrecy import PowerProfile, Scenario, solve_max_sr

sc = Scenario.from_degrees(8, 45, 70)
power = PowerProfile.from_snr_db(10.0)

sol, trace = solve_max_sr(sc, power, init="leakage", delta=1e-4)
print("leakage init:", [round(r, 5) for r in trace.sr_per_iteration])
print("  GPI steps per outer iteration:", trace.inner_gpi_iterations)

counts = []
for seed in range(20):
    s, t = solve_max_sr(sc, power, init="random", seed=seed, delta=1e-4)
    counts.append(t.iterations)
    if seed < 3:
        print(f"random seed {seed}:", [round(r, 5) for r in t.sr_per_iteration])
print("outer iterations, random starts: median", np.median(counts), "max", max(counts))
print("final secrecy rate", sol.secrecy_rate)

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    plt.plot(range(1, trace.iterations + 1), trace.sr_per_iteration, "o-", label="leakage init")
    for seed in range(3):
        t = solve_max_sr(sc, power, init="random", seed=seed)[1]
        plt.plot(range(1, t.iterations + 1), t.sr_per_iteration, "s--", label=f"random init {seed}")
    plt.xlabel("outer iteration")
    plt.ylabel("secrecy rate (bit/s/Hz)")
    plt.legend()
    plt.savefig("convergence.png", dpi=120)
