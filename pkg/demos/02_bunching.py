"""
Bunching n imperfect photons into one mode
==========================================

Send n independent inputs through a balanced n-port and keep only the events
in which every photon leaves through output 1. For perfect single photons the
result is |n>; for real sources it is a mixture whose quality we want to
judge.
"""

import math
import time

import numpy as np

from fockcap import bunching_weight, fock, merge_bruteforce, merge_convolution, normalize

# Hong-Ou-Mandel: two photons on a 50:50 splitter leave together half the time.
hom = merge_convolution([fock(1), fock(1)])
print("HOM success:", hom.success_probability, "output:", hom.output.probs)

###############################################################################
# Perfect inputs succeed with probability n!/n^n, which dies off quickly.
for n in (2, 3, 5, 10, 20):
    res = merge_convolution([fock(1)] * n)
    print(f"n={n:2d}  success={res.success_probability:.3e}  n!/n^n={math.factorial(n) / n**n:.3e}")

# A single tuple of input photon numbers bunches with probability M!/prod(m_j!) n^-M.
print("weight (2,1,1) into 3 modes:", bunching_weight((2, 1, 1), 3))

###############################################################################
# The brute-force sum over all (cutoff+1)^n tuples is the reference. The
# generating-function backend is polynomial in n and agrees to rounding.
d = normalize([0.07, 0.91, 0.02])
for n in (4, 8, 12):
    t0 = time.perf_counter()
    slow = merge_bruteforce([d] * n)
    t1 = time.perf_counter()
    fast = merge_convolution([d] * n)
    t2 = time.perf_counter()
    gap = np.max(np.abs(slow.unnormalized - fast.unnormalized))
    print(f"n={n:2d}  gap={gap:.1e}  brute {t1 - t0:.3f}s  convolution {t2 - t1:.5f}s")

###############################################################################
# Fourteen copies of the set-7 statistics. Most of the output sits at 14,
# the vacuum part spreads below and the m=2 part leaks above.
out = merge_convolution([d] * 14).output
print("P(13), P(14), P(15):", out.probs[13:16])
print("mass above 14:", out.probs[15:].sum())
