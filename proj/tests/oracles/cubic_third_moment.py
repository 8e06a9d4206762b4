"""Conditional third moment of the increment of M = int B^2 dB.

E[(M_T - M_t)^3 | B_t = b] as a polynomial in b, by symbolic Gaussian
moment expansion, cross-checked with nested Monte Carlo.
"""
import numpy as np
import sympy as sp

b, s = sp.symbols("b s", positive=True)

# M_T - M_t = b^2 A + b (A^2 - s) + C,  A = W_s,  C = int_0^s W^2 dW = A^3/3 - I,
# I = int_0^s W_u du.  (A, I) jointly Gaussian: Var A = s, Var I = s^3/3, Cov = s^2/2.
A, I = sp.symbols("A I")
incr = b**2 * A + b * (A**2 - s) + (A**3 / 3 - I)
poly = sp.Poly(sp.expand(incr**3), A, I)


def gauss_moment(i, j):
    # E[A^i I^j] via Isserlis on the 2x2 covariance
    x, y = sp.symbols("x y")
    cov = sp.Matrix([[s, s**2 / 2], [s**2 / 2, s**3 / 3]])
    mgf = sp.exp(sp.Rational(1, 2) * (sp.Matrix([x, y]).T * cov * sp.Matrix([x, y]))[0])
    return sp.diff(mgf, x, i, y, j).subs({x: 0, y: 0})


third = 0
for (i, j), c in poly.terms():
    third += c * gauss_moment(i, j)
third = sp.simplify(sp.expand(third))
print("E[dM^3 | b] =", sp.collect(sp.expand(third), b))
coeffs = sp.Poly(sp.expand(third.subs(s, sp.Rational(1, 2))), b).all_coeffs()
print("s=1/2 coefficients (high->low):", [float(c) for c in coeffs])

# nested Monte Carlo check at a few b values
rng = np.random.default_rng(7)
n, N = 2000, 200000
ds = 0.5 / n
f = sp.lambdify(b, third.subs(s, sp.Rational(1, 2)))
for bv in (0.3, 0.8, -1.2):
    acc = np.zeros(N)
    Bp = np.full(N, bv)
    for _ in range(n):
        dB = rng.standard_normal(N) * np.sqrt(ds)
        acc += Bp**2 * dB
        Bp += dB
    m3 = np.mean(acc**3)
    se = np.std(acc**3) / np.sqrt(N)
    print(f"b={bv}: poly={f(bv):.5f}, nestedMC={m3:.5f} +- {se:.5f}")
