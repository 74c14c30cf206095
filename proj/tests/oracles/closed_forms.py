"""Independent closed-form oracles for the square barrier and square well.

Every frozen constant in the C++ tests that is tagged "closed form" was
produced by this script (mpmath at 40 digits, sympy for series). It does not
touch the C++ code path.
"""
import mpmath as mp
import sympy as sp

mp.mp.dps = 40


def riccati(ell, x):
    """u_l = x j_l(x), v_l = -x y_l(x) and their x-derivatives."""
    u = lambda t: t * mp.besselj(ell + mp.mpf(1) / 2, t) * mp.sqrt(mp.pi / (2 * t))
    v = lambda t: -t * mp.bessely(ell + mp.mpf(1) / 2, t) * mp.sqrt(mp.pi / (2 * t))
    return u(x), mp.diff(u, x), v(x), mp.diff(v, x)


def inner_solution(ell, v0, k, radius):
    """Regular interior solution (up to normalisation) and its r-derivative at r = radius."""
    e = mp.mpf(k) ** 2 - v0
    if e > 0:
        q = mp.sqrt(e)
        f = lambda r: r * mp.besselj(ell + mp.mpf(1) / 2, q * r) / mp.sqrt(q * r)
    elif e < 0:
        kap = mp.sqrt(-e)
        f = lambda r: r * mp.besseli(ell + mp.mpf(1) / 2, kap * r) / mp.sqrt(kap * r)
    else:
        f = lambda r: r ** (ell + 1)
    return f(radius), mp.diff(f, radius)


def square_phase(ell, v0, radius, k):
    """Phase shift modulo pi in (-pi/2, pi/2]."""
    k = mp.mpf(k)
    phi, dphi = inner_solution(ell, v0, k, radius)
    u, du, v, dv = riccati(ell, k * radius)
    num = (k * du) * phi - u * dphi
    den = (k * dv) * phi - v * dphi
    return mp.atan(-num / den)


def s_wave_series(v0, radius, order=7):
    k = sp.symbols('k', positive=True)
    v0s = sp.nsimplify(v0)
    if v0 > 0:
        kap = sp.sqrt(v0s - k**2)
        delta = sp.atan(k * sp.tanh(kap * radius) / kap) - k * radius
    else:
        q = sp.sqrt(-v0s + k**2)
        delta = sp.atan(k * sp.tan(q * radius) / q) - k * radius
    ser = sp.series(delta, k, 0, order).removeO()
    a = -ser.coeff(k, 1)
    b = ser.coeff(k, 3)
    return sp.N(a, 30), sp.N(b, 30)


def main():
    print("# barrier V0=4 R=1")
    a, b = s_wave_series(4, 1)
    print("a0", a, " closed", mp.mpf(1) - mp.tanh(2) / 2)
    print("b", b)
    print("r0", sp.N(sp.Rational(2, 3) * a - 2 * b / a**2, 30))
    for ell in (0, 1, 2):
        for k in ("0.01", "0.1", "0.5", "1", "2", "3", "10"):
            print("delta", ell, k, mp.nstr(square_phase(ell, 4, 1, mp.mpf(k)), 25))
    # l >= 1 scattering lengths: tan(delta_l) ~ -a_l k^(2l+1)
    for ell in (1, 2):
        k = mp.mpf("1e-12")
        print("a_l", ell, mp.nstr(-mp.tan(square_phase(ell, 4, 1, k)) / k ** (2 * ell + 1), 20))
    print("# well V0=5 R=1")
    a, b = s_wave_series(-5, 1)
    print("a0", a, " closed", 1 - mp.tan(mp.sqrt(5)) / mp.sqrt(5))
    print("b", b)
    g = mp.findroot(lambda gam: mp.sqrt(5 - gam**2) * mp.cot(mp.sqrt(5 - gam**2)) + gam, 1.0)
    print("gamma1", mp.nstr(g, 25))
    print("abar", mp.nstr(a - 2 / g, 25))
    print("# well V0=30 R=1")
    a, b = s_wave_series(-30, 1)
    print("a0", a)
    f = lambda gam: mp.sqrt(30 - gam**2) * mp.cot(mp.sqrt(30 - gam**2)) + gam
    for guess in (1.0, 4.5, 5.0):
        try:
            print("gamma", mp.nstr(mp.findroot(f, guess), 25))
        except Exception as exc:  # noqa
            print("no root near", guess, exc)
    print("threshold depth pi^2/4 =", mp.nstr(mp.pi**2 / 4, 20))
    print("# hard sphere V0=1e8")
    kap = mp.sqrt(mp.mpf(10) ** 8)
    print("a0", mp.nstr(1 - mp.tanh(kap) / kap, 20))
    a, b = s_wave_series(10**8, 1, order=5)
    print("b", b, "r0", sp.N(sp.Rational(2, 3) * a - 2 * b / a**2, 20))


if __name__ == "__main__":
    main()
