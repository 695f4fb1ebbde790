"""Independent high-precision reference values frozen into the C++ tests.

Run with: python3 tests/oracles/gen_oracles.py
Only mpmath/sympy are used here; nothing from the C++ implementation.
"""
import mpmath as mp
import sympy as sp

mp.mp.dps = 40


def show(label, value):
    print(f"{label:48s} {mp.nstr(value, 20)}")


# Gamma function
show("lgamma(0.5)", mp.log(mp.gamma(mp.mpf(1) / 2)))
show("lgamma(5)", mp.log(24))
for g in ["0.1", "0.25", "0.5", "0.75", "0.9"]:
    g = mp.mpf(g)
    show(f"d_gamma({g})", 2 ** (2 * g) * mp.gamma(g) / mp.gamma(-g))

# Sphere constants
for n, g in [(3, "0.5"), (2, "0.5"), (3, "0.25"), (4, "0.75")]:
    g = mp.mpf(g)
    vol = 2 * mp.pi ** (mp.mpf(n + 1) / 2) / mp.gamma(mp.mpf(n + 1) / 2)
    mult = mp.gamma(n / mp.mpf(2) + g) / mp.gamma(n / mp.mpf(2) - g)
    show(f"|S^{n}|", vol)
    show(f"Q(n={n},g={g})", 2 / (n - 2 * g) * mult)
    show(f"Y(n={n},g={g})", mult * vol ** (2 * g / n))
show("Gamma(4.25)/Gamma(3.75)", mp.gamma(4.25) / mp.gamma(3.75))

# Hyperbolic areas/volumes, n = 3
t = mp.mpf(1)
show("area n=3 t=1", 2 * mp.pi**2 * mp.sinh(t) ** 3)
show("ball n=3 t=1 (closed form)", 2 * mp.pi**2 * (mp.cosh(t) ** 3 / 3 - mp.cosh(t) + mp.mpf(2) / 3))
show("ball n=3 t=1 (quad)", 2 * mp.pi**2 * mp.quad(lambda s: mp.sinh(s) ** 3, [0, 1]))

# Closed-form adapted profile n=3, gamma=1/2
show("1/(1+cosh 1)*2", 2 / (1 + mp.cosh(1)))

# Perturbed warp eta(2) with eps=0.01, a=3 (bump is 1 for t >= 1)
show("0.01*exp(-6)", mp.mpf("0.01") * mp.exp(-6))

# Escobar constants
for n in [3, 4, 5]:
    vol1 = 2 * mp.pi ** (mp.mpf(n + 2) / 2) / mp.gamma(mp.mpf(n + 2) / 2)
    show(f"Ya hemisphere n={n}", n * (n + 1) * (vol1 / 2) ** (mp.mpf(2) / (n + 1)))
y1 = (2 * mp.pi**2) ** (mp.mpf(1) / 3)
show("Yb(3, Y1(S^3))", 6 * y1)

# Energy limit n=3 gamma=1/2
show("2 pi^2", 2 * mp.pi**2)

# d_gamma sign and multiplier monotonicity spot check
show("d_gamma(1/2)", 2 ** 1 * mp.gamma(0.5) / mp.gamma(-0.5))

# x^2 coefficient of the adapted solution on the hyperbolic model, via a
# formal Frobenius substitution in the geodesic defining function x.
x, F1, G0, G1 = sp.symbols("x F1 G0 G1")
for n_val, g_val in [(3, sp.Rational(1, 2)), (3, sp.Rational(1, 4)), (4, sp.Rational(3, 4)), (5, sp.Rational(1, 4))]:
    s = sp.Rational(n_val, 2) + g_val
    c = n_val - s
    v = x**c * (1 + F1 * x**2 + G0 * x ** (2 * g_val) + G1 * x ** (2 * g_val + 2))
    a = (1 - x**2 / 4)
    lap = x ** (n_val + 1) * a ** (-n_val) * sp.diff(x ** (1 - n_val) * a**n_val * sp.diff(v, x), x)
    expr = sp.expand(sp.simplify((lap + s * (n_val - s) * v) / x**c))
    expr = sp.series(expr, x, 0, 3).removeO()
    sol = sp.solve(sp.expand(expr).coeff(x, 2), F1)
    formula = sp.Rational(1, 1) * (n_val - 2 * g_val) / (8 * (1 - g_val)) * sp.Rational(n_val, 2)
    print(f"F1(n={n_val}, gamma={g_val}) frobenius={sol} formula={formula}")
