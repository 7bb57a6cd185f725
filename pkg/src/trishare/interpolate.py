"""Lagrange reconstruction of the sharing polynomial from k points.

Given exactly k points with distinct abscissae, the degree-(k-1)
polynomial through them is unique; the secret is its value at 0.
Supplying more than k points is an error rather than a fit: extra
points would silently mask inconsistencies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .errors import Error
from .field import FieldModulus, SecretPolynomial, mod_inverse, poly_eval
from .sharing import BindingCode, SharePoint, derive_binding_x


class DuplicateAbscissa(Error):
    """Two input points share an x; interpolation is undefined."""


class NotEnoughPoints(Error):
    """Fewer points than the expected threshold k."""


class TooManyPoints(Error):
    """More points than k; refuse to guess which to drop."""


@dataclass(frozen=True)
class ReconstructionInput:
    """k points plus the modulus; validates distinctness at construction."""

    points: Tuple[SharePoint, ...]
    modulus: FieldModulus
    k: "int | None" = None

    def __post_init__(self) -> None:
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        expected = self.k if self.k is not None else len(pts)
        object.__setattr__(self, "k", expected)
        if len(pts) < expected:
            raise NotEnoughPoints(f"got {len(pts)} points, need {expected}")
        if len(pts) > expected:
            raise TooManyPoints(
                f"got {len(pts)} points for threshold {expected}; "
                "refusing to least-squares-fit"
            )
        seen = set()
        for pt in pts:
            if pt.modulus.p != self.modulus.p:
                raise Error(
                    f"point modulus {pt.modulus.p} != input modulus {self.modulus.p}"
                )
            if pt.x in seen:
                raise DuplicateAbscissa(f"duplicate abscissa x={pt.x}")
            seen.add(pt.x)


def lagrange_basis_at(inp: ReconstructionInput, j: int, x: int) -> int:
    """Value of the j-th Lagrange basis polynomial at x, mod p."""
    p = inp.modulus.p
    xj = inp.points[j].x
    num = 1
    den = 1
    for m, pt in enumerate(inp.points):
        if m == j:
            continue
        num = num * (x - pt.x) % p
        den = den * (xj - pt.x) % p
    return num * mod_inverse(den, p) % p


def reconstruct_secret(inp: ReconstructionInput) -> int:
    """F(0): the shared secret."""
    p = inp.modulus.p
    acc = 0
    for j, pt in enumerate(inp.points):
        acc = (acc + pt.y * lagrange_basis_at(inp, j, 0)) % p
    return acc


def reconstruct_polynomial(inp: ReconstructionInput) -> SecretPolynomial:
    """Full monomial coefficients [a0, ..., a_{k-1}] of the interpolant.

    Expands sum_j y_j * l_j(X) by multiplying out each basis
    numerator.  Under a production modulus a degenerate result (zero
    leading coefficient) raises InvalidPolynomial; with honest shares
    that only happens with probability ~1/p.
    """
    p = inp.modulus.p
    k = len(inp.points)
    coeffs = [0] * k
    for j, pt in enumerate(inp.points):
        num = [1]  # ascending coefficients of prod_{m != j} (X - x_m)
        den = 1
        for m, other in enumerate(inp.points):
            if m == j:
                continue
            num = _mul_linear(num, other.x, p)
            den = den * (pt.x - other.x) % p
        scale = pt.y * mod_inverse(den, p) % p
        for i, c in enumerate(num):
            coeffs[i] = (coeffs[i] + c * scale) % p
    return SecretPolynomial(tuple(coeffs), inp.modulus)


def _mul_linear(coeffs: List[int], root: int, p: int) -> List[int]:
    """Multiply an ascending-coefficient polynomial by (X - root) mod p."""
    out = [0] * (len(coeffs) + 1)
    for i, c in enumerate(coeffs):
        out[i] = (out[i] - c * root) % p
        out[i + 1] = (out[i + 1] + c) % p
    return out


def verify_binding(poly: SecretPolynomial, code: BindingCode,
                   file_id: bytes) -> bool:
    """Does the reconstructed polynomial match the file's binding code?

    Recomputes x_kc from the file identity and kc from the polynomial;
    a single tampered share point changes the interpolant and flips this
    to False with probability 1 - 1/p.
    """
    expected_x = derive_binding_x(file_id, poly.modulus)
    if code.x_kc != expected_x:
        return False
    kc = (poly.coeffs[0] + poly_eval(poly, code.x_kc)) % poly.modulus.p
    return kc == code.kc
