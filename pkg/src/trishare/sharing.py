"""Threshold splitting of a secret into share points on a polynomial.

The secret a0 is the constant term of F(X) = a0 + a1*X + ... over Z_p;
users receive points (x, F(x)) with x = 1..n, never x = 0.  Coefficients
come from salted attribute hashes, so re-salting re-randomizes every
share while keeping the same secret.  A binding code ties the polynomial
to a file identity so reconstruction from tampered points is detectable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Sequence

from .errors import Error
from .field import FieldModulus, SecretPolynomial, modulus_for, poly_eval
from .hashing import fnv1a64


class TooFewAttributes(Error):
    """Need at least k-1 attributes to derive k-1 coefficients."""


class SecretTooLarge(Error):
    """The secret must be a field element, i.e. less than p."""


class NotEnoughUsers(Error):
    """Fewer share points requested than the threshold k."""


@dataclass(frozen=True)
class SharePoint:
    """One share (x, y) on the polynomial, with its modulus.

    x = 0 is forbidden: the point (0, F(0)) is the secret itself.
    """

    x: int
    y: int
    modulus: FieldModulus

    def __post_init__(self) -> None:
        p = self.modulus.p
        if not 1 <= self.x < p:
            raise Error(f"share abscissa x={self.x} outside [1, {p})")
        object.__setattr__(self, "y", self.y % p)


@dataclass(frozen=True)
class BindingCode:
    """kc = (secret + F(x_kc)) mod p, evaluated at a file-derived x_kc."""

    kc: int
    x_kc: int


@dataclass(frozen=True)
class EncryptedShare:
    """Share record handed to a receiver; y is blinded by their credentials.

    Serializes to the wire format:
    {"file_id", "x", "y_enc", "p", "kc", "x_kc"}.
    """

    file_id: str
    x: int
    y_enc: int
    p: int
    kc: int
    x_kc: int

    def to_dict(self) -> dict:
        return {"file_id": self.file_id, "x": self.x, "y_enc": self.y_enc,
                "p": self.p, "kc": self.kc, "x_kc": self.x_kc}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "EncryptedShare":
        return cls(file_id=d["file_id"], x=int(d["x"]), y_enc=int(d["y_enc"]),
                   p=int(d["p"]), kc=int(d["kc"]), x_kc=int(d["x_kc"]))

    @classmethod
    def from_json(cls, text: str) -> "EncryptedShare":
        return cls.from_dict(json.loads(text))


def derive_attribute_tokens(attributes: Sequence[bytes], salt: bytes, k: int,
                            modulus: FieldModulus) -> List[int]:
    """Coefficients a1..a_{k-1} from salted attribute hashes.

    Token j = fnv1a64(salt || attribute_j) mod p, with 0 remapped to 1
    so no coefficient (in particular the leading one) degenerates.  Uses
    the first k-1 attributes.
    """
    if len(attributes) < k - 1:
        raise TooFewAttributes(
            f"need {k - 1} attributes for threshold {k}, got {len(attributes)}"
        )
    p = modulus.p
    tokens = []
    for attr in attributes[:k - 1]:
        t = fnv1a64(salt + attr) % p
        tokens.append(t if t != 0 else 1)
    return tokens


def split_secret(secret: int, coeffs: Sequence[int], n_users: int,
                 modulus: FieldModulus) -> List[SharePoint]:
    """Evaluate F at x = 1..n_users; F = secret + coeffs[0]*X + ...

    k = len(coeffs) + 1 is the reconstruction threshold; n_users must be
    at least k or the secret could never be recovered.
    """
    p = modulus.p
    if not 0 <= secret < p:
        raise SecretTooLarge(f"secret {secret} is not a field element mod {p}")
    k = len(coeffs) + 1
    if n_users < k:
        raise NotEnoughUsers(f"{n_users} users cannot meet threshold k={k}")
    poly = SecretPolynomial((secret, *coeffs), modulus)
    return [SharePoint(x=x, y=poly_eval(poly, x), modulus=modulus)
            for x in range(1, n_users + 1)]


def derive_binding_x(file_id: bytes, modulus: FieldModulus) -> int:
    """File-derived evaluation abscissa in [1, p-1]; never 0."""
    return fnv1a64(file_id) % (modulus.p - 1) + 1


def binding_code(secret: int, poly: SecretPolynomial, file_id: bytes,
                 x_kc: "int | None" = None) -> BindingCode:
    """kc = (secret + F(x_kc)) mod p at the file-derived x_kc.

    `x_kc` may be pinned explicitly (diagnostics); by default it is
    derived from the file identity.
    """
    if x_kc is None:
        x_kc = derive_binding_x(file_id, poly.modulus)
    kc = (secret + poly_eval(poly, x_kc)) % poly.modulus.p
    return BindingCode(kc=kc, x_kc=x_kc)


def _cred_blind(credentials: bytes, p: int) -> int:
    return fnv1a64(credentials) % p


def encrypt_share(share: SharePoint, receiver_credentials: bytes, file_id: str,
                  binding: BindingCode) -> EncryptedShare:
    """Blind y with the receiver's credential hash: y_enc = (y + h) mod p.

    The record carries the binding fields so a receiver can present it
    standalone.  x stays in the clear; a lone x reveals nothing about
    the secret.
    """
    p = share.modulus.p
    y_enc = (share.y + _cred_blind(receiver_credentials, p)) % p
    return EncryptedShare(file_id=file_id, x=share.x, y_enc=y_enc, p=p,
                          kc=binding.kc, x_kc=binding.x_kc)


def decrypt_share(record: EncryptedShare, credentials: bytes) -> SharePoint:
    """Unblind a share record with the holder's credentials."""
    modulus = modulus_for(record.p)
    y = (record.y_enc - _cred_blind(credentials, record.p)) % record.p
    return SharePoint(x=record.x, y=y, modulus=modulus)
