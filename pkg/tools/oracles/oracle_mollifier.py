"""Exact constants for the compactly supported mollifier kernels.

Time kernel on (-1, 0):   phi(t) = c_t (1 - (2t+1)^2)^4
Space kernel on B_1(0):   psi(x) = c_x (1 - |x|^2)^4

Computes the normalizers exactly, the first moments, and the second
radial moment of psi (used to bound the linearization defect of
mollification against smooth fields).
"""

import sympy as sp

t, r = sp.symbols("t r", real=True)

int_t = sp.integrate((1 - (2 * t + 1) ** 2) ** 4, (t, -1, 0))
c_t = sp.Rational(1, 1) / int_t
print(f"FROZEN time normalizer c_t = {c_t}  (integral of shape = {int_t})")
assert c_t == sp.Rational(315, 128)

first_moment_t = sp.integrate(c_t * t * (1 - (2 * t + 1) ** 2) ** 4, (t, -1, 0))
print(f"FROZEN time kernel first moment = {first_moment_t}")

int_x = sp.integrate((1 - r**2) ** 4 * 2 * sp.pi * r, (r, 0, 1))
c_x = 1 / int_x
print(f"FROZEN space normalizer c_x = {c_x}  (integral of shape = {int_x})")
assert c_x == 5 / sp.pi

second_moment_x = sp.integrate(c_x * r**2 * (1 - r**2) ** 4 * 2 * sp.pi * r,
                               (r, 0, 1))
print(f"FROZEN space kernel second radial moment = {second_moment_x}")

# Odd moments of psi vanish by symmetry; the leading mollification error
# against a smooth field is (eps^2/2) * moment2 * Laplacian-type terms.
print("oracle_mollifier: all checks passed")
