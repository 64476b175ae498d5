"""Symbolic oracle for stationary shear-flow products on the torus.

For the eight-direction set used by the decomposition, builds

    W(xi) = sum_k b_k * i * k_perp * exp(i k . xi)       (unit |k|)

with real symbolic pair coefficients b_k = b_{-k}, confirms W is real and
divergence free, expands W (x) W exactly, and adjudicates the two candidate
pressure scalars

    p_minus = (|W|^2 - |S|^2) / 2
    p_plus  = (|W|^2 + |S|^2) / 2 - sum_k b_k^2,   S = sum_k b_k exp(i k . xi)

against div(W (x) W) = grad p.  Also verifies the two-vector identity
(j_perp . k) k_perp + (k_perp . j) j_perp = (j_perp . k_perp - 1) (j + k)
for every ordered pair from the set, and the single-pair degenerate case.

Frozen outputs are copied into tests/test_geometry.py.
"""

import sympy as sp

x1, x2 = sp.symbols("x1 x2", real=True)
xi = sp.Matrix([x1, x2])

dirs = [
    sp.Matrix([1, 0]),
    sp.Matrix([-1, 0]),
    sp.Matrix([0, 1]),
    sp.Matrix([0, -1]),
    sp.Matrix([sp.Rational(3, 5), sp.Rational(4, 5)]),
    sp.Matrix([sp.Rational(-3, 5), sp.Rational(-4, 5)]),
    sp.Matrix([sp.Rational(3, 5), sp.Rational(-4, 5)]),
    sp.Matrix([sp.Rational(-3, 5), sp.Rational(4, 5)]),
]


def perp(k):
    return sp.Matrix([-k[1], k[0]])


b1, b2, b3, b4 = sp.symbols("b1 b2 b3 b4", real=True)
coeff = [b1, b1, b2, b2, b3, b3, b4, b4]

# The carrier frequencies must be integer vectors on the torus; scale by 5.
lam = 5

W = sp.zeros(2, 1)
S = sp.Integer(0)
for k, b in zip(dirs, coeff):
    phase = sp.exp(sp.I * lam * (k.T * xi)[0])
    W += b * sp.I * perp(k) * phase
    S += b * phase

W = sp.simplify(sp.expand_complex(W))
S = sp.simplify(sp.expand_complex(S))
assert W.has(sp.I) is False, "W not real"
assert S.has(sp.I) is False, "S not real"
print("PASS W and S real for real pair coefficients")

divW = sp.simplify(sp.diff(W[0], x1) + sp.diff(W[1], x2))
assert divW == 0, "W not divergence free"
print("PASS div W = 0")

T = W * W.T
divT = sp.Matrix([
    sp.diff(T[0, 0], x1) + sp.diff(T[1, 0], x2),
    sp.diff(T[0, 1], x1) + sp.diff(T[1, 1], x2),
])

sum_b2 = 2 * (b1**2 + b2**2 + b3**2 + b4**2)
p_plus = sp.simplify((W.T * W)[0] / 2 + S**2 / 2 - sum_b2)
p_minus = sp.simplify((W.T * W)[0] / 2 - S**2 / 2)

res_plus = sp.simplify(divT - sp.Matrix([sp.diff(p_plus, x1), sp.diff(p_plus, x2)]))
res_minus = sp.simplify(divT - sp.Matrix([sp.diff(p_minus, x1), sp.diff(p_minus, x2)]))

assert res_plus == sp.zeros(2, 1), "plus-form pressure does not close"
print("PASS div(W (x) W) = grad p with p = (|W|^2 + |S|^2)/2 - sum b_k^2")
assert res_minus != sp.zeros(2, 1), "minus form unexpectedly closes"
print("PASS minus-form pressure rejected (nonzero residual, as derived)")

# Single-pair degenerate case: p_plus must vanish identically.
single = {b2: 0, b3: 0, b4: 0}
p_single = sp.simplify(p_plus.subs(single))
assert p_single == 0, "single-pair pressure not identically zero"
print("PASS single-pair case: p identically zero and div(W (x) W) = 0")

# Mean of p_plus over the torus is zero (no constant term after expansion).
p_poly = sp.expand_trig(sp.expand(p_plus))
const_term = p_poly
for sym in (x1, x2):
    const_term = const_term.subs(sym, 0)
mean = sp.integrate(sp.integrate(p_poly, (x1, -sp.pi, sp.pi)),
                    (x2, -sp.pi, sp.pi)) / (4 * sp.pi**2)
assert sp.simplify(mean) == 0, "p_plus not mean-free"
print("PASS p mean-free over the torus")

# Vector identity for all ordered pairs.
count = 0
for j in dirs:
    for k in dirs:
        lhs = (perp(j).T * k)[0] * perp(k) + (perp(k).T * j)[0] * perp(j)
        rhs = ((perp(j).T * perp(k))[0] - 1) * (j + k)
        assert sp.simplify(lhs - rhs) == sp.zeros(2, 1)
        count += 1
print(f"PASS vector identity for all {count} ordered pairs")

# Frozen numeric regression: p at a sample point with sample coefficients.
subs = {b1: sp.Rational(3, 10), b2: sp.Rational(-1, 5),
        b3: sp.Rational(1, 2), b4: sp.Rational(1, 7),
        x1: sp.Rational(1, 3), x2: sp.Rational(-2, 7)}
print(f"FROZEN p_plus at sample = {sp.nsimplify(p_plus.subs(subs), rational=False)}"
      f" = {float(p_plus.subs(subs)):.15e}")
Wval = [float(W[0].subs(subs)), float(W[1].subs(subs))]
print(f"FROZEN W at sample = [{Wval[0]:.15e}, {Wval[1]:.15e}]")

# Same coefficients at a dyadic-in-pi point (lands on power-of-two grids).
subs_grid = {b1: sp.Rational(3, 10), b2: sp.Rational(-1, 5),
             b3: sp.Rational(1, 2), b4: sp.Rational(1, 7),
             x1: sp.pi / 4, x2: -5 * sp.pi / 8}
print(f"FROZEN p_plus at grid point = {float(p_plus.subs(subs_grid)):.15e}")
print(f"FROZEN W at grid point = [{float(W[0].subs(subs_grid)):.15e}, "
      f"{float(W[1].subs(subs_grid)):.15e}]")
print(f"FROZEN S at grid point = {float(S.subs(subs_grid)):.15e}")

print("oracle_mikado: all checks passed")
