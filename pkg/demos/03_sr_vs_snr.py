"""
Secrecy rate versus SNR
=======================

Runs the SNR sweep for the three methods with the shipped reference
setup (``configs/paper.json``) and prints a table. The same rows are what ``dm-secrecy sweep-snr``
writes to CSV.
"""

from pathlib import Path

import numpy as np

import dmsecrecy
from dmsecrecy.experiments import load_config, run_sr_vs_snr

config = load_config(Path(dmsecrecy.__file__).parent / "configs" / "paper.json")
config.snr_db = [-5, 0, 5, 10, 15, 20]
rows = run_sr_vs_snr(config)

table = {}
for r in rows:
    if r.metric == "secrecy_rate":
        table.setdefault(r.sweep_value, {})[r.method] = r.value

print(" SNR   max_sr  leakage   nsp    gain/leak  gain/nsp")
for snr, sr in sorted(table.items()):
    print(
        f"{snr:4.0f}  {sr['max_sr']:7.3f}  {sr['leakage']:7.3f}  {sr['nsp']:6.3f}"
        f"   {sr['max_sr'] / sr['leakage']:7.4f}  {sr['max_sr'] / sr['nsp']:7.4f}"
    )

# Bob's rate can never exceed log2(1 + beta1^2 Ps / sigma^2), which caps any
# gain over a method that already nearly reaches it.
for snr in sorted(table):
    ceiling = np.log2(1 + config.beta1_sq * 10 ** (snr / 10))
    print(f"{snr:4.0f} dB ceiling {ceiling:.3f}  ceiling/leakage {ceiling / table[snr]['leakage']:.4f}")
