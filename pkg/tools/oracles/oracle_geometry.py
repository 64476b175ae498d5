"""Exact-arithmetic oracle for the symmetric-matrix decomposition.

Derives, in rational arithmetic, the coefficients a_k^2(R) that write a
symmetric 2x2 matrix R near the identity as sum_k a_k^2 k_perp (x) k_perp
over the eight-direction set

    {+-(1,0), +-(0,1), +-(3,4)/5, +-(3,-4)/5},

with a_{-k} = a_k and the free diagonal parameter c = 1/4 splitting the
slanted pair.  Verifies the reconstruction identity symbolically for a
generic symmetric R, evaluates the coefficients and their derivatives at
R = Id exactly, and checks positivity margins on the sigma = 1e-3 ball.

Frozen outputs are copied into tests/test_geometry.py as literals.
"""

import sympy as sp

r11, r12, r22 = sp.symbols("r11 r12 r22", real=True)
R = sp.Matrix([[r11, r12], [r12, r22]])
c = sp.Rational(1, 4)

# Directions (one per pair; the opposite direction carries the same value).
e1 = sp.Matrix([1, 0])
e2 = sp.Matrix([0, 1])
p = sp.Matrix([sp.Rational(3, 5), sp.Rational(4, 5)])
q = sp.Matrix([sp.Rational(3, 5), sp.Rational(-4, 5)])


def perp(k):
    return sp.Matrix([-k[1], k[0]])


def outer(v):
    return v * v.T


# Pair coefficients (each the sum over the two opposite directions).
gamma_plus = c - sp.Rational(25, 24) * r12     # pair +-p
gamma_minus = c + sp.Rational(25, 24) * r12    # pair +-q
alpha = r11 - sp.Rational(32, 25) * c          # pair +-(0,1), k_perp along e1
beta = r22 - sp.Rational(18, 25) * c           # pair +-(1,0), k_perp along e2

recon = (
    alpha * outer(perp(e2))
    + beta * outer(perp(e1))
    + gamma_plus * outer(perp(p))
    + gamma_minus * outer(perp(q))
)

assert sp.simplify(recon - R) == sp.zeros(2, 2), "reconstruction identity failed"
print("PASS reconstruction identity (generic symmetric R, exact)")

# Values at R = Id.
at_id = {r11: 1, r12: 0, r22: 1}
pairs_at_id = {
    "alpha(+-(0,1))": alpha.subs(at_id),
    "beta(+-(1,0))": beta.subs(at_id),
    "gamma_plus(+-p)": gamma_plus.subs(at_id),
    "gamma_minus(+-q)": gamma_minus.subs(at_id),
}
for name, val in pairs_at_id.items():
    print(f"FROZEN pair {name} at Id = {val} = {sp.nsimplify(val)}")

# Per-direction values are half the pair values.
for name, val in pairs_at_id.items():
    print(f"FROZEN per-direction {name}/2 at Id = {sp.Rational(val, 2)}")

# Derivatives of the per-direction amplitudes a_k = sqrt(pair/2) at Id,
# with respect to (r11, r12, r22).  Exact rationals over square roots.
for name, pair in [
    ("a(0,1)", alpha),
    ("a(1,0)", beta),
    ("a(p)", gamma_plus),
    ("a(q)", gamma_minus),
]:
    a = sp.sqrt(pair / 2)
    grads = [sp.simplify(sp.diff(a, v).subs(at_id)) for v in (r11, r12, r22)]
    print(f"FROZEN grad {name} at Id = {grads}")

# Positivity margin on the ball: entries of R - Id bounded by sigma in the
# Frobenius sense implies |r12| <= sigma and |rii - 1| <= sigma.
sigma = sp.Rational(1, 1000)
worst = {
    "alpha": alpha.subs({r11: 1 - sigma, r12: 0, r22: 1}),
    "beta": beta.subs({r11: 1, r12: 0, r22: 1 - sigma}),
    "gamma_plus": gamma_plus.subs({r11: 1, r12: sigma, r22: 1}),
    "gamma_minus": gamma_minus.subs({r11: 1, r12: -sigma, r22: 1}),
}
for name, val in worst.items():
    assert val > 0, f"{name} not positive on ball"
    print(f"FROZEN worst-case pair {name} on sigma-ball = {val} = {float(val):.6f}")

# Affine check: the map R -> a_k^2 is affine, so a finite difference of
# a_k^2 in any matrix direction reproduces the derivative exactly.
direction = sp.Matrix([[sp.Rational(1, 7), sp.Rational(-1, 9)],
                       [sp.Rational(-1, 9), sp.Rational(2, 11)]])
t = sp.symbols("t")
shift = {r11: 1 + t * direction[0, 0], r12: t * direction[0, 1],
         r22: 1 + t * direction[1, 1]}
for name, pair in [("alpha", alpha), ("beta", beta),
                   ("gamma_plus", gamma_plus), ("gamma_minus", gamma_minus)]:
    expr = pair.subs(shift)
    assert sp.diff(expr, t, 2) == 0, f"{name} not affine in R"
print("PASS pair coefficients affine in R (exact second derivative zero)")

# Sample point inside the ball for a frozen regression value.
sample = {r11: sp.Rational(10004, 10000), r12: sp.Rational(-3, 10000),
          r22: sp.Rational(9998, 10000)}
for name, pair in [("alpha", alpha), ("beta", beta),
                   ("gamma_plus", gamma_plus), ("gamma_minus", gamma_minus)]:
    print(f"FROZEN pair {name} at sample R = {pair.subs(sample)}")

print("oracle_geometry: all checks passed")
