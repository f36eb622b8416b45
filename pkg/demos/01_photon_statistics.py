"""
Photon-number statistics of heralded single photons
===================================================

A heralded source is summarized by three numbers: the single-photon
probability P1, the multi-photon tail P2+ and whatever is left in vacuum.
Here we build those distributions and look at the quantities usually quoted
alongside them.
"""

import numpy as np

from fockcap import apply_loss, g2_zero, origin_negativity, summarize, truncate_multiphoton
from fockcap.reference import TABLE_I, row_distribution

# The best data set: 7% vacuum, 91% single photons, 2% multi-photon.
# P2+ is lumped entirely onto m = 2, the only split we can justify.
d = row_distribution(7)
print("set 7:", d.probs)
print(summarize(d))

###############################################################################
# The Wigner function at the phase-space origin is the parity expectation,
# sum_m (-1)^m p_m. Every row of the table is reproduced by that formula.
for k, row in TABLE_I.items():
    w0 = origin_negativity(row_distribution(row))
    print(f"set {k}: 2*pi*W(0) = {w0:+.3f}   reported {row.origin_negativity:+.2f} +/- {row.origin_negativity_err}")

###############################################################################
# Loss is a binomial channel. It drags the origin toward positive values
# but leaves g2(0) untouched, which is why g2 alone says little about loss.
for eta in (1.0, 0.9, 0.7, 0.5):
    lossy = apply_loss(d, eta)
    print(f"eta={eta:.1f}  p={np.round(lossy.probs, 4)}  g2={g2_zero(lossy):.4f}  W0={origin_negativity(lossy):+.4f}")

# Dropping the multi-photon tail is the other knob, used later in loss sweeps.
print("truncated:", truncate_multiphoton(d).probs)
