"""Regenerate the frozen reference values used by the test suite.

Everything here uses mpmath at 40+ digits and shares no code with the
package.  Run ``python3 tests/generate_oracles.py`` and paste the output
into ``tests/oracles.py`` if a value ever needs to change.
"""
import mpmath as mp

mp.mp.dps = 40


def ein_series(z):
    z = mp.mpc(z)
    return mp.nsum(lambda k: (-1) ** (k + 1) * z**k / (k * mp.factorial(k)), [1, mp.inf])


def ein_fast(x):
    # x real > 0; used inside quadratures only
    x = mp.mpf(x)
    if x < 1:
        return ein_series(x).real
    return mp.euler + mp.log(x) + mp.e1(x)


def ein_c(z):
    z = mp.mpc(z)
    if abs(z) < 4:
        return ein_series(z)
    return mp.euler + mp.log(z) + mp.e1(z)


def qstar_laplace(alphas, shifts, u):
    beta = sum(mp.mpc(a) for a in alphas)
    b = list(zip(alphas[1:], shifts[1:]))

    def f(x):
        return x ** (-beta - 1) * mp.exp(-u * x + sum(mp.mpc(a) * ein_fast(v * x) for a, v in b))

    k = 1 / (-beta.real) if beta.real > -1 else 1
    # x = t^k on [0, 1] removes the endpoint singularity
    head = mp.quad(lambda t: f(t**k) * k * t ** (k - 1), [0, 1])
    tail = mp.quad(f, [1, 4, 16, mp.inf])
    return (head + tail) / mp.gamma(-beta)


def qstar_hankel(alphas, shifts, u, rho=0.5):
    beta = sum(mp.mpc(a) for a in alphas)
    b = list(zip(alphas[1:], shifts[1:]))

    def expo(z):
        return u * z + sum(mp.mpc(a) * ein_c(-v * z) for a, v in b)

    def ray(x, sgn):
        return mp.exp((-beta - 1) * (mp.log(x) + sgn * 1j * mp.pi) + expo(-x))

    lower = mp.quad(lambda x: ray(x, -1), [rho, 4, 16, mp.inf])
    upper = mp.quad(lambda x: ray(x, 1), [rho, 4, 16, mp.inf])
    circle = mp.quad(
        lambda th: mp.exp((-beta - 1) * (mp.log(rho) + 1j * th) + expo(rho * mp.exp(1j * th))) * 1j * rho * mp.exp(1j * th),
        [-mp.pi, 0, mp.pi],
    )
    # in along the lower side (arg -pi, x decreasing), round the circle, out along the upper side;
    # dz = -dx on both rays
    total = lower - upper + circle
    return mp.gamma(beta + 1) / (2j * mp.pi) * total


def p_second_panel(alphas, u):
    """p(u, a, b) for a single shift v_1 = 1 and 1 < u <= 2 from the marching formula."""
    a = 1 + mp.mpf(alphas[0])
    al = mp.mpf(alphas[1])
    c0 = mp.exp(-al * mp.euler)
    first = lambda t: c0 / mp.gamma(1 - a) * t ** (-a)
    integral = mp.quad(lambda t: t ** (a - 1) * al * first(t - 1), [1, u])
    return (first(1) - integral) / u**a


if __name__ == "__main__":
    for z in (1, 50, 2.5, 10, -3, 1 + 2j, -5 + 0.1j, 30j, 0.01):
        print("ein", z, mp.nstr(ein_series(z), 20))
    for z in (0.5, -0.5, 2.5 + 1j, -3.7 + 0.2j, 10 + 5j):
        print("gamma", z, mp.nstr(mp.gamma(z), 20))
    for alphas, shifts, u in (
        ((0, -1), (0, 1), 1),
        ((0, -1), (0, 1), 5),
        ((-0.5, -0.25), (0, 1), 1),
        ((-0.5, -0.25), (0, 1), 3),
        ((-0.3, -0.4, -0.6), (0, 1, 1.7), 2),
        ((0.5 + 0.2j, -1.2 - 0.1j), (0, 1), 2),
    ):
        print("laplace", alphas, shifts, u, mp.nstr(qstar_laplace(alphas, shifts, u), 18))
    for alphas, shifts, u in (((1.5, -1.2), (0, 1), 2), ((0.8 + 0.3j, -0.5), (0, 1), 3)):
        print("hankel", alphas, shifts, u, mp.nstr(qstar_hankel(alphas, shifts, u), 18))
    for u in (1.5, 2.0):
        print("p(a=.5)", u, mp.nstr(p_second_panel((-0.5, -0.7), u), 18))
