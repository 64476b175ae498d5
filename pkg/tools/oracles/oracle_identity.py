"""Symbolic oracle for the oscillation-cancellation decomposition.

Certifies, with fully generic slow amplitudes, the exact algebra that
error_terms.py implements.  Directions are indexed by the four pairs

    P1: k=(1,0)    k_perp=(0,1)
    P2: k=(0,1)    k_perp=(-1,0)
    P3: k=(3,4)/5  k_perp=(-4,3)/5
    P4: k=(3,-4)/5 k_perp=(4,3)/5

Claim 1 (oscillation split).  For generic amplitudes A_P(x) and the main
parts m = sum_P -2 lam A_P sin(lam k_P.x) k_P_perp,

    div(m (x) m) = grad P1 + E1a + E1b + T_diag

with
    P1     = -2 lam^2 sum_{P<Q} A_P A_Q [wp cos(Phi+) + wm cos(Phi-)]
    E1a    = +2 lam^2 sum_{P<Q} [wp cos(Phi+) + wm cos(Phi-)] grad(A_P A_Q)
    E1b    = 4 lam^2 sum_{P,Q} sin_P sin_Q (k_P_perp . grad(A_P A_Q)) k_Q_perp
             - T_diag
    T_diag = 2 lam^2 sum_P (k_P_perp . grad A_P^2) k_P_perp
    wp     = k_P_perp . k_Q_perp - 1
    wm     = -(k_P_perp . k_Q_perp + 1)
    Phi+-  = lam (k_P +- k_Q) . x

Claim 2 (mean-channel split).  For generic envelope Theta(x), generic
symmetric stress Rw(x), generic profiles phi_P(x) and amplitudes g_P(x),
with h_P^2 the affine per-direction coefficients of Id + Rw/(1000 C0) from
the geometric decomposition,

    2 lam^2 sum_P div(Theta phi_P^2 g_P^2 kperp (x) kperp)
      = E2t1 + E2t2 + grad(2000 C0 lam^2 Theta)
        + 2 lam^2 [Theta (div Rw) + Rw grad(Theta)]

with
    E2t1 = 2 lam^2 sum_P div(Theta phi_P^2 (g_P^2 - 2000 C0 h_P^2) kperp(x)kperp)
    E2t2 = 4000 C0 lam^2 sum_P div(Theta (phi_P^2 - 1) h_P^2 kperp (x) kperp).

Claim 3 (time factor).  For w_i(t,x) = Theta(x) v(t,x) exp(-2 lam^2 t),
    d/dt w_i = -2 lam^2 w_i + Theta (d/dt v) exp(-2 lam^2 t).

Also freezes the interaction weight and carrier tables used by the
implementation.
"""

import sympy as sp

x1, x2, t = sp.symbols("x1 x2 t", real=True)
lam = sp.symbols("lam", positive=True)
C0 = sp.symbols("C0", positive=True)

K = [sp.Matrix([1, 0]), sp.Matrix([0, 1]),
     sp.Matrix([sp.Rational(3, 5), sp.Rational(4, 5)]),
     sp.Matrix([sp.Rational(3, 5), sp.Rational(-4, 5)])]
KP = [sp.Matrix([-k[1], k[0]]) for k in K]


def grad(f):
    return sp.Matrix([sp.diff(f, x1), sp.diff(f, x2)])


def div_tensor(T):
    return sp.Matrix([
        sp.diff(T[0, 0], x1) + sp.diff(T[1, 0], x2),
        sp.diff(T[0, 1], x1) + sp.diff(T[1, 1], x2),
    ])


def is_zero_vec(v):
    for comp in v:
        if sp.expand(comp.rewrite(sp.exp).doit()) != 0:
            return False
    return True


# ---------------------------------------------------------------- claim 1
A = [sp.Function(f"A{i}")(x1, x2) for i in range(4)]
phase = [lam * (K[i].T * sp.Matrix([x1, x2]))[0] for i in range(4)]

m = sp.zeros(2, 1)
for i in range(4):
    m += -2 * lam * A[i] * sp.sin(phase[i]) * KP[i]

mm = m * m.T
lhs1 = div_tensor(mm)

P1 = sp.Integer(0)
E1a = sp.zeros(2, 1)
for i in range(4):
    for j in range(i + 1, 4):
        wp = (KP[i].T * KP[j])[0] - 1
        wm = -((KP[i].T * KP[j])[0] + 1)
        cp = sp.cos(phase[i] + phase[j])
        cm = sp.cos(phase[i] - phase[j])
        P1 += -2 * lam**2 * A[i] * A[j] * (wp * cp + wm * cm)
        E1a += 2 * lam**2 * (wp * cp + wm * cm) * grad(A[i] * A[j])

T_diag = sp.zeros(2, 1)
for i in range(4):
    T_diag += 2 * lam**2 * (KP[i].T * grad(A[i]**2))[0] * KP[i]

E1b = -T_diag
for i in range(4):
    for j in range(4):
        E1b += (4 * lam**2 * sp.sin(phase[i]) * sp.sin(phase[j])
                * (KP[i].T * grad(A[i] * A[j]))[0] * KP[j])

residual1 = lhs1 - grad(P1) - E1a - E1b - T_diag
assert is_zero_vec(residual1), "claim 1 failed"
print("PASS claim 1: div(m (x) m) = grad P1 + E1 + T_diag (generic amplitudes)")

# ---------------------------------------------------------------- claim 2
Theta = sp.Function("Theta")(x1, x2)
Rw11 = sp.Function("Rw11")(x1, x2)
Rw12 = sp.Function("Rw12")(x1, x2)
Rw22 = sp.Function("Rw22")(x1, x2)
Rw = sp.Matrix([[Rw11, Rw12], [Rw12, Rw22]])
phi = [sp.Function(f"phi{i}")(x1, x2) for i in range(4)]
g = [sp.Function(f"g{i}")(x1, x2) for i in range(4)]

Rt = sp.eye(2) + Rw / (1000 * C0)
# Per-direction affine coefficients (half the pair values) of the
# decomposition of Rt, matching oracle_geometry.py with c = 1/4.
c = sp.Rational(1, 4)
h2 = [
    (Rt[1, 1] - sp.Rational(18, 25) * c) / 2,   # pair +-(1,0), k_perp = e2
    (Rt[0, 0] - sp.Rational(32, 25) * c) / 2,   # pair +-(0,1), k_perp = -e1
    (c - sp.Rational(25, 24) * Rt[0, 1]) / 2,   # pair +-p
    (c + sp.Rational(25, 24) * Rt[0, 1]) / 2,   # pair +-q
]

lhs2 = sp.zeros(2, 1)
E2t1 = sp.zeros(2, 1)
E2t2 = sp.zeros(2, 1)
for i in range(4):
    op = KP[i] * KP[i].T
    lhs2 += div_tensor(2 * lam**2 * Theta * phi[i]**2 * g[i]**2 * op)
    E2t1 += div_tensor(2 * lam**2 * Theta * phi[i]**2
                       * (g[i]**2 - 2000 * C0 * h2[i]) * op)
    E2t2 += div_tensor(4000 * C0 * lam**2 * Theta * (phi[i]**2 - 1)
                       * h2[i] * op)

P2 = 2000 * C0 * lam**2 * Theta
divRw = sp.Matrix([
    sp.diff(Rw[0, 0], x1) + sp.diff(Rw[1, 0], x2),
    sp.diff(Rw[0, 1], x1) + sp.diff(Rw[1, 1], x2),
])
closure = 2 * lam**2 * (Theta * divRw + Rw * grad(Theta))

residual2 = lhs2 - E2t1 - E2t2 - grad(P2) - closure
assert is_zero_vec(residual2), "claim 2 failed"
print("PASS claim 2: mean-channel split exact for generic envelope/stress")

# ---------------------------------------------------------------- claim 3
v = sp.Function("v")(t, x1, x2)
w_i = Theta * v * sp.exp(-2 * lam**2 * t)
res3 = sp.simplify(sp.diff(w_i, t)
                   - (-2 * lam**2 * w_i
                      + Theta * sp.diff(v, t) * sp.exp(-2 * lam**2 * t)))
assert res3 == 0, "claim 3 failed"
print("PASS claim 3: time-factor product rule")

# ------------------------------------------------------- frozen tables
print("FROZEN interaction weights (P<Q): wp = kPp.kQp - 1, wm = -(kPp.kQp + 1)")
for i in range(4):
    for j in range(i + 1, 4):
        dot = (KP[i].T * KP[j])[0]
        print(f"  pair ({i},{j}): dot={dot}  wp={dot - 1}  wm={-(dot + 1)}"
              f"  k+={list((K[i] + K[j]).T)}  k-={list((K[i] - K[j]).T)}")

print("oracle_identity: all checks passed")
