"""
Steering vectors, beam patterns and secrecy rate
================================================

A quick tour of the channel model: an 8-element half-wavelength array,
Bob at 45 degrees and Eve at 70 degrees. We look at how much power each
baseline beamformer puts toward both receivers and what secrecy rate that
buys at 10 dB SNR.
"""

import numpy as np

from dmsecrecy import PowerProfile, Scenario, rate_at, steering_vector
from dmsecrecy.beamformers import solve_leakage, solve_nsp
from dmsecrecy.metrics import an_power_at

sc = Scenario.from_degrees(8, 45, 70)
power = PowerProfile.from_snr_db(10.0)  # Ps / sigma^2 = 10, beta1^2 = 0.9

# The steering vector has unit norm and equal-modulus entries.
h = sc.h_d
print("|h_d| =", np.linalg.norm(h), " entry moduli:", np.unique(np.round(np.abs(h), 12)))

# Correlation between the two directions controls how hard the problem is.
print("|h_d^H h_e| =", abs(np.vdot(sc.h_d, sc.h_e)))

###############################################################################
# Signal and AN gain versus direction for the two closed-form baselines.
angles = np.deg2rad(np.arange(5, 180, 5))
for sol in (solve_nsp(sc, power), solve_leakage(sc, power)):
    signal = np.array([abs(np.vdot(steering_vector(sc.array, t), sol.precoder)) ** 2 for t in angles])
    an = np.array([sol.an.alpha**2 * an_power_at(sc.array, t, sol.an) for t in angles])
    print(f"\n{sol.method}: secrecy rate {sol.secrecy_rate:.3f} bit/s/Hz")
    print("  angle  signal   AN")
    for t, s, a in zip(np.rad2deg(angles), signal, an):
        if t in (30, 45, 60, 70, 90):
            print(f"  {t:5.0f}  {s:6.3f}  {a:6.3f}")

###############################################################################
# Rates at Bob and Eve. NSP gives Bob the full no-interference rate but
# leaks the message toward Eve; the leakage design nulls Eve instead.
for sol in (solve_nsp(sc, power), solve_leakage(sc, power)):
    rd = rate_at(sc.array, sc.theta_d, sol.precoder, sol.an, power)
    re = rate_at(sc.array, sc.theta_e, sol.precoder, sol.an, power)
    print(f"{sol.method:8s} R(Bob) = {rd:.3f}  R(Eve) = {re:.3f}")
