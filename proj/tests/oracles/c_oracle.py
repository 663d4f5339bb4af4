"""High-precision reference values used to freeze expected numbers in the C++ tests.

Two independent routes for the boundary coefficient c(a1, a2):
  * direct 50-digit quadrature of the rho-integral (valid for 1 < a1 + a2),
  * closed form through Beta and 2F1, which continues to every a1 + a2.
Also the log-case q-integral I(alpha) by tanh-sinh in mpmath.
"""
import mpmath as mp

mp.mp.dps = 50


def c_direct(a1, a2):
    a1, a2 = mp.mpf(a1), mp.mpf(a2)
    s = a1 + a2
    f = lambda r: (r ** -a1 + r ** -a2) * ((1 - r) ** (s - 2) - (1 + r) ** (s - 2))
    integral = mp.quad(f, [0, mp.mpf(1) / 2, 1])
    return 2 ** -s / mp.sqrt(mp.pi) * mp.gamma((2 - s) / 2) * integral


def _plus_piece(a, s):
    # int_0^1 rho^-a (1+rho)^(s-2) drho
    return mp.hyp2f1(2 - s, 1 - a, 2 - a, -1) / (1 - a)


def c_closed(a1, a2):
    a1, a2 = mp.mpf(a1), mp.mpf(a2)
    s = a1 + a2
    # B(1-a1, s-1) + B(1-a2, s-1) = Gamma(s-1) [Gamma(1-a1)/Gamma(a2) + Gamma(1-a2)/Gamma(a1)]
    minus = mp.gamma(s - 1) * (mp.gamma(1 - a1) * mp.rgamma(a2) + mp.gamma(1 - a2) * mp.rgamma(a1))
    plus = _plus_piece(a1, s) + _plus_piece(a2, s)
    return 2 ** -s / mp.sqrt(mp.pi) * mp.gamma((2 - s) / 2) * (minus - plus)


def q_integral(alpha, angular=False):
    """Stated measure (1+q^2)/q dq, or dq/q when angular is set."""
    al = mp.mpf(alpha)
    m = (lambda q: 1 / q) if angular else (lambda q: (1 + q * q) / q)

    def f(q):
        br = ((1 + q) / (1 - q)) ** (al - 1) + ((1 - q) / (1 + q)) ** al - 2 * (1 - q) / mp.sqrt(1 + q * q)
        return m(q) * br

    def g(w):
        # 1 - q = w^100 smooths the (1-q)^(1-alpha) endpoint for every alpha < 2
        if w == 0:
            return mp.mpf(0)
        v = w ** 100
        q = 1 - v
        br = ((2 - v) / v) ** (al - 1) + (v / (2 - v)) ** al - 2 * v / mp.sqrt(1 + q * q)
        return m(q) * br * 100 * w ** 99

    return mp.quad(f, [0, mp.mpf(1) / 2]) + mp.quad(g, [0, mp.mpf(1) / 2 ** (mp.mpf(1) / 100)])


if __name__ == "__main__":
    print("c direct (0.7,0.8) =", mp.nstr(c_direct(0.7, 0.8), 30))
    print("c closed (0.7,0.8) =", mp.nstr(c_closed(0.7, 0.8), 30))
    print("c closed (0,0)     =", mp.nstr(c_closed(mp.mpf('1e-30'), mp.mpf('-1e-30') * 0 + mp.mpf('1e-31')), 30),
          " -2/sqrt(pi) =", mp.nstr(-2 / mp.sqrt(mp.pi), 30))
    for p in [(1.8, 1.4), (0.8, 1.4), (1.8, 0.4), (0.8, 0.4), (-0.2, 1.4), (1.8, -0.6),
              (0.4, 0.9), (0.3, 0.4), (-0.5, 0.2), (1.3, -1.9), (0.25, -2.6)]:
        print("c closed", p, "=", mp.nstr(c_closed(*p), 25))
    for p in [(1.8, 1.4), (0.8, 1.4), (0.8, 0.4), (1.5, 0.3)]:
        print("c direct", p, "=", mp.nstr(c_direct(*p), 25))
    for a in [0.5, 1.3, -0.3, 0.3, 0.7, 1.9, -0.9]:
        print("I(%s) =" % a, mp.nstr(q_integral(a), 25))
    for a in [0.5, 1.0, 1.3, 1.9, 1.99]:
        print("I_angular(%s) =" % a, mp.nstr(q_integral(a, True), 25))
