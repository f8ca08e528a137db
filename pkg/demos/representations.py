"""q* three ways: Laplace integral, Hankel contour and the polynomial case."""
import numpy as np

from ddepair import make_params, q_series_inf, qstar, qstar_hankel, qstar_laplace

P = make_params((-0.3 + 0.1j, -0.4, -0.6 - 0.05j), (0, 1, 1.7))
print("u     laplace                                  |laplace - hankel|")
for u in (0.5, 1.0, 5.0, 10.0):
    lap, han = qstar_laplace(P, u), qstar_hankel(P, u)
    print(f"{u:4.1f}  {lap:.15f}  {abs(lap - han):.1e}")

print("\nlarge u against the series sum_n binom(beta, n) Q_n(0, b) u^(beta - n):")
for u in (10.0, 20.0, 40.0):
    q = qstar(P, u).value
    print(f"{u:4.0f}  " + "  ".join(f"N={N}: {abs(q - q_series_inf(P, u, N)):.1e}" for N in (1, 2, 3, 4)))

poly = make_params((2.0, -1.0), (0, 1))
print("\nbeta = 1 gives q* = u + 1:", [qstar(poly, u).value for u in np.arange(1.0, 5.0)])
