"""
Reading the negative regions of a radial Wigner function
========================================================

A Fock-diagonal state has a rotationally symmetric Wigner function. With
u = r^2 (vacuum variance 1) it is exp(-u/2) times a polynomial, so every
negative ring is an interval between two real roots of that polynomial.
"""

import numpy as np

from fockcap import (
    apply_loss,
    capability_test,
    fit_attenuated_fock,
    fock,
    ideal_region_count,
    merge_convolution,
    negative_regions,
    normalize,
    radial_wigner,
    wigner_cut,
)

# |3> has a negative disk at the origin and one negative ring.
s = negative_regions(radial_wigner(fock(3)))
print("|3>:", s.region_count, "regions, origin negative:", s.origin_negative, "roots:", s.root_radii)
print("ideal |14>:", ideal_region_count(14))

###############################################################################
# The two-copy threshold. Mixing two copies of {1-p, p} gives a polynomial
# that just touches zero at p = 2/3: (u-1)^2/5, no negative region at all.
for p in (0.6, 2 / 3, 0.7):
    out = merge_convolution([normalize([1 - p, p])] * 2).output
    w = radial_wigner(out)
    print(f"p={p:.4f}  poly={np.round(w.coeffs, 4)}  regions={negative_regions(w).region_count}"
          f"  passes={capability_test(out, 2)}")

###############################################################################
# Fourteen set-7 copies keep the full ring structure of |14>.
d = normalize([0.07, 0.91, 0.02])
out = merge_convolution([d] * 14).output
print("14 copies match |14>:", capability_test(out, 14))

# An attenuated |14> describes the merged state well.
eta, residual = fit_attenuated_fock(out, 14)
print(f"fitted eta = {eta:.4f}, residual = {residual:.2e}")
r = np.linspace(0, 8, 9)
model = apply_loss(fock(14), eta)
for ri, a, b in zip(r, wigner_cut(out, r), wigner_cut(model, r)):
    print(f"r={ri:.1f}  2*pi*W merged {a:+.4f}  attenuated |14> {b:+.4f}")
