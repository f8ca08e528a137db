"""Dickman's rho and Buchstab's omega from the retarded solver.

rho(u) = e^gamma p(u, 0, b) with alphas = (-1, 1); omega(u) = e^-gamma p(u, 1, b)
with alphas = (0, -1), reached by one lift from a = 0.
"""
import math

import numpy as np

from ddepair import EULER_GAMMA, lift_a, make_params, preset, solve_p

U = 12.0
dickman = solve_p(preset("dickman"), U)
print("u      rho(u)")
for u in np.arange(1.0, U + 0.5, 1.0):
    print(f"{u:4.1f}   {math.exp(EULER_GAMMA) * dickman(u).real:.15e}")

buch = preset("buchstab")
base = solve_p(buch.with_alpha0(buch.alpha0 - 1), U)
print("\nu      omega(u)             omega(u) - e^-gamma")
for u in np.arange(1.5, U + 0.5, 1.0):
    w = math.exp(-EULER_GAMMA) * lift_a(buch, u, 1, base).real
    print(f"{u:4.1f}   {w:.15f}   {w - math.exp(-EULER_GAMMA):+.3e}")

# the a = 0 base of the Buchstab parameters decays like the polynomial u + 1
b0 = make_params((-1, -1), (0, 1))
sol = solve_p(b0, U)
print("\np(u, 0, (-1)) / (u + 1):", [round(sol(u).real / (u + 1), 12) for u in (4.0, 8.0, 12.0)])
