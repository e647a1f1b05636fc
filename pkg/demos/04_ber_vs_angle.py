"""
BER versus receive direction
============================

Monte-Carlo QPSK over the three beamformers at 10 dB. The receiver along
each direction knows its composite gain. AN is invisible at 45 degrees and
scrambles the constellation at 70 degrees.
"""

import numpy as np

from dmsecrecy import PowerProfile, Scenario
from dmsecrecy.beamformers import solve_leakage, solve_max_sr, solve_nsp
from dmsecrecy.linksim import LinkConfig, ber_sweep

sc = Scenario.from_degrees(8, 45, 70)
power = PowerProfile.from_snr_db(10.0)
cfg = LinkConfig(num_symbols=20_000, seed=0, angle_grid=np.deg2rad(np.arange(1.0, 180.0, 1.0)))

curves = {
    sol.method: ber_sweep(sol, sc, power, cfg)
    for sol in (solve_max_sr(sc, power)[0], solve_leakage(sc, power), solve_nsp(sc, power))
}

deg = np.rad2deg(cfg.angle_grid)
print(" angle   " + "  ".join(f"{m:>8s}" for m in curves))
for a in (20, 30, 40, 44, 45, 46, 50, 60, 70, 90, 120):
    k = int(np.argmin(np.abs(deg - a)))
    print(f"{a:6.0f}   " + "  ".join(f"{c.ber[k]:8.5f}" for c in curves.values()))

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    for m, c in curves.items():
        plt.semilogy(deg, np.maximum(c.ber, 1e-5), label=m)
    plt.xlabel("direction (deg)")
    plt.ylabel("BER")
    plt.legend()
    plt.savefig("ber_vs_angle.png", dpi=120)
