"""Pair q* with Gamma(-beta) p(u, a, b) and watch the adjoint constant stay at 1."""
import numpy as np

from ddepair import adjoint_constant, make_params, preset, upq_limits

cases = {
    "iwaniec(1)": preset("iwaniec", 1.0),
    "iwaniec(1/2)": preset("iwaniec", 0.5),
    "complex, m=2": make_params((0.3 + 0.2j, -0.9, -0.6 - 0.1j), (0, 0.7, 1.6)),
}
grid = np.linspace(3.0, 8.0, 6)
for name, P in cases.items():
    rep = adjoint_constant(P, grid)
    print(f"{name:14s} A = {rep.A_mean:.12f}   max deviation {rep.max_dev:.2e}")

lim = upq_limits(preset("iwaniec", 0.5), U_large=60.0)
print(f"\nu p q at 0+: {lim.limit_zero}   at u=60: {lim.limit_inf.real:.6f}   Richardson: {lim.limit_inf_richardson.real:.6f}")

rep = adjoint_constant(preset("dickman"), grid, bypass_normalization=True)
print("Dickman with q = 1, unnormalised:", np.abs(rep.A_estimates).max())
