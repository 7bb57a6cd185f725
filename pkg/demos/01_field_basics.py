"""
Prime fields, modular inverses, and integer roots
=================================================

Everything downstream (sharing, reconstruction, binding codes) runs on
exact integer arithmetic in Z_p.  This walk-through pokes at the field
layer directly.
"""

from trishare import (
    M61,
    default_modulus,
    integer_nth_root,
    mod_inverse,
    modulus_for,
    poly_eval,
    SecretPolynomial,
)

# The production modulus is the Mersenne prime 2^61 - 1.  Small primes
# are allowed only in an explicit test profile, so demos can use p = 97
# without that foot-gun leaking into production paths.
m = default_modulus()
print(f"production modulus p = {m.p} (that is 2^61 - 1: {m.p == M61})")

m97 = modulus_for(97)
print(f"small-field profile: p = {m97.p}, test_profile = {m97.test_profile}")

# Inverses come from the extended Euclidean algorithm.
inv3 = mod_inverse(3, m97)
print(f"\ninverse of 3 mod 97 = {inv3}  (check: 3 * {inv3} mod 97 = {3 * inv3 % 97})")

# The polynomial F(X) = 1234 + 166 X + 94 X^2 is the running example
# used throughout the library.
poly = SecretPolynomial((1234, 166, 94), m)
print(f"\nF(X) = 1234 + 166 X + 94 X^2 over p = {m.p}")
for x in range(1, 7):
    print(f"  F({x}) = {poly_eval(poly, x)}")

# Exact integer n-th roots drive the power-mode cipher: a symbol
# (a - s)^n decrypts by taking the root and checking it is exact.
print(f"\nisqrt-style roots: 935^2 = {935**2}, root back = "
      f"{integer_nth_root(935**2, 2)}")
print(f"874226 is not a perfect square: root {integer_nth_root(874226, 2)} "
      f"squares to {integer_nth_root(874226, 2)**2}")
