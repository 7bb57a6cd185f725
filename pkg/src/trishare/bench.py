"""Benchmarks, the pinned worked example, and storage-overhead models.

Timing uses the monotonic clock, discards one warm-up run, and reports
medians of at least five repetitions.  Throughput is computed from the
measured encryption time (plaintext size / encrypt seconds), never
measured independently, so reported rows are internally consistent.
"""

from __future__ import annotations

import io
import json
import platform
import random
import statistics
import sys
import time
from dataclasses import dataclass, field
from math import log
from typing import Callable, List, Optional, Sequence, Tuple

from .authz import (PolicyDb, UserRecord, UserType, grant_access,
                    register_user)
from .cipher import Mode, derive_file_key, open_file, seal_file
from .errors import Error
from .field import FieldModulus, default_modulus
from .interpolate import ReconstructionInput, reconstruct_polynomial, reconstruct_secret
from .sharing import SharePoint, split_secret
from .storage import ObjectStore

MIN_REPS = 5


class ExampleMismatch(Error):
    """A pinned worked-example assertion failed."""


# Pinned worked-example constants: F(X) = 1234 + 166 X + 94 X^2 over the
# default modulus, six issued points, reconstruction from x = 2, 4, 5.
EXAMPLE_SECRET = 1234
EXAMPLE_COEFFS = (166, 94)
EXAMPLE_N_POINTS = 6
EXAMPLE_POINTS = ((1, 1494), (2, 1942), (3, 2578), (4, 3402), (5, 4414), (6, 5614))
EXAMPLE_RECONSTRUCTION_XS = (2, 4, 5)


@dataclass(frozen=True)
class AssertionResult:
    name: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass
class ExampleReport:
    """All assertions of the worked example; raised-through on failure."""

    modulus_p: int
    assertions: List[AssertionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.ok for a in self.assertions)

    def lines(self) -> List[str]:
        out = []
        for a in self.assertions:
            mark = "ok" if a.ok else "MISMATCH"
            out.append(f"{mark:8s} {a.name}: expected {a.expected}, got {a.actual}")
        return out


def verify_reference_example(modulus: "FieldModulus | None" = None,
                         reconstruction_points: "Sequence[Tuple[int, int]] | None" = None,
                         ) -> ExampleReport:
    """Check the pinned split/reconstruct example end to end.

    Raises ExampleMismatch at the first failing assertion.  Running
    under a small modulus fails by design: the pinned values exceed p
    and wrap.  `reconstruction_points` substitutes the three points fed
    to reconstruction (fault-injection hook).
    """
    if modulus is None:
        modulus = default_modulus()
    report = ExampleReport(modulus_p=modulus.p)

    def check(name: str, expected, actual) -> None:
        result = AssertionResult(name=name, expected=expected, actual=actual)
        report.assertions.append(result)
        if not result.ok:
            raise ExampleMismatch(
                f"{name}: expected {expected}, got {actual} (p={modulus.p})")

    try:
        shares = split_secret(EXAMPLE_SECRET, EXAMPLE_COEFFS, EXAMPLE_N_POINTS,
                              modulus)
    except Error as exc:
        report.assertions.append(AssertionResult(
            name="split", expected="six points", actual=f"error: {exc}"))
        raise ExampleMismatch(f"split failed under p={modulus.p}: {exc}") from exc

    for (x, y), share in zip(EXAMPLE_POINTS, shares):
        check(f"point x={x}", y, share.y)

    if reconstruction_points is None:
        reconstruction_points = [(x, y) for x, y in EXAMPLE_POINTS
                                 if x in EXAMPLE_RECONSTRUCTION_XS]
    pts = tuple(SharePoint(x=x, y=y, modulus=modulus)
                for x, y in reconstruction_points)
    inp = ReconstructionInput(points=pts, modulus=modulus)
    check("reconstructed secret", EXAMPLE_SECRET, reconstruct_secret(inp))
    poly = reconstruct_polynomial(inp)
    check("reconstructed coefficients",
          (EXAMPLE_SECRET, *EXAMPLE_COEFFS), poly.coeffs)
    return report


# ---------------------------------------------------------------------------
# Timing helpers
# ---------------------------------------------------------------------------

def _median_seconds(fn: Callable[[], object], reps: int) -> float:
    """Median wall time of `reps` calls, after one discarded warm-up."""
    fn()
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx = [log(x) for x in xs]
    ly = [log(y) for y in ys]
    mean_x = sum(lx) / len(lx)
    mean_y = sum(ly) / len(ly)
    num = sum((a - mean_x) * (b - mean_y) for a, b in zip(lx, ly))
    den = sum((a - mean_x) ** 2 for a in lx)
    return num / den


def _environment_note() -> str:
    return f"{platform.platform()} / Python {sys.version.split()[0]}"


# ---------------------------------------------------------------------------
# Encryption benchmark
# ---------------------------------------------------------------------------

DEFAULT_BENCH_SIZES = tuple(kb * 1024 for kb in (5, 10, 15, 20, 25, 30))

ENCRYPT_CSV_HEADER = "size_bytes,cipher_bytes,encrypt_s,decrypt_s,throughput_kbps"


@dataclass(frozen=True)
class BenchRow:
    input_size_bytes: int
    ciphertext_size_bytes: int
    encrypt_seconds: float
    decrypt_seconds: float

    @property
    def throughput_kb_per_s(self) -> Optional[float]:
        """Plaintext size over encryption time, in KB (1024 B) per second."""
        if self.input_size_bytes == 0:
            return None
        return (self.input_size_bytes / 1024) / self.encrypt_seconds


@dataclass
class BenchReport:
    mode: Mode
    reps: int
    environment: str
    rows: List[BenchRow] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(ENCRYPT_CSV_HEADER + "\n")
        for r in self.rows:
            tp = r.throughput_kb_per_s
            buf.write(",".join([
                str(r.input_size_bytes),
                str(r.ciphertext_size_bytes),
                repr(r.encrypt_seconds),
                repr(r.decrypt_seconds),
                "NA" if tp is None else repr(tp),
            ]) + "\n")
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.name.lower(),
            "reps": self.reps,
            "environment": self.environment,
            "rows": [
                {"size_bytes": r.input_size_bytes,
                 "cipher_bytes": r.ciphertext_size_bytes,
                 "encrypt_s": r.encrypt_seconds,
                 "decrypt_s": r.decrypt_seconds,
                 "throughput_kbps": r.throughput_kb_per_s}
                for r in self.rows
            ],
        }


def bench_encrypt(sizes: Sequence[int] = DEFAULT_BENCH_SIZES,
                  mode: Mode = Mode.ADDITIVE, n: int = 1,
                  reps: int = MIN_REPS, seed: int = 0xC0FFEE) -> BenchReport:
    """Seal/open timing over random corpora of the given sizes."""
    if reps < MIN_REPS:
        raise Error(f"reps must be >= {MIN_REPS}")
    rng = random.Random(seed)
    master = rng.randrange(1, default_modulus().p)
    key = derive_file_key(master, "bench.dat", mode=mode, n=n)
    report = BenchReport(mode=mode, reps=reps, environment=_environment_note())
    for size in sizes:
        data = rng.randbytes(size)
        envelope = seal_file(data, key)
        enc_s = _median_seconds(lambda: seal_file(data, key), reps)
        dec_s = _median_seconds(lambda: open_file(envelope, key), reps)
        report.rows.append(BenchRow(
            input_size_bytes=size,
            ciphertext_size_bytes=len(envelope.payload),
            encrypt_seconds=enc_s,
            decrypt_seconds=dec_s,
        ))
    return report


# ---------------------------------------------------------------------------
# Attribute-count benchmark
# ---------------------------------------------------------------------------

DEFAULT_K_VALUES = (3, 5, 9, 13, 17, 21)

ATTRS_CSV_HEADER = "k,n_users,split_s,reconstruct_s"


@dataclass(frozen=True)
class AttrBenchRow:
    k: int
    n_users: int
    split_seconds: float
    reconstruct_seconds: float


@dataclass
class AttrBenchReport:
    reps: int
    environment: str
    rows: List[AttrBenchRow] = field(default_factory=list)
    split_fit_slope: float = 0.0
    split_fit_intercept: float = 0.0
    split_fit_residual: float = 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(ATTRS_CSV_HEADER + "\n")
        for r in self.rows:
            buf.write(f"{r.k},{r.n_users},{r.split_seconds!r},"
                      f"{r.reconstruct_seconds!r}\n")
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "reps": self.reps,
            "environment": self.environment,
            "rows": [
                {"k": r.k, "n_users": r.n_users, "split_s": r.split_seconds,
                 "reconstruct_s": r.reconstruct_seconds}
                for r in self.rows
            ],
            "split_fit": {"slope": self.split_fit_slope,
                          "intercept": self.split_fit_intercept,
                          "residual": self.split_fit_residual},
        }


def bench_attributes(k_values: Sequence[int] = DEFAULT_K_VALUES,
                     n_users: int = 24, reps: int = MIN_REPS,
                     seed: int = 0xA77) -> AttrBenchReport:
    """Split/reconstruct timing as the threshold k grows.

    Fits split time linearly in k and reports the RMS residual; split
    work is n evaluations of a degree-(k-1) polynomial, so the fit
    should be tight.
    """
    if reps < MIN_REPS:
        raise Error(f"reps must be >= {MIN_REPS}")
    modulus = default_modulus()
    p = modulus.p
    rng = random.Random(seed)
    report = AttrBenchReport(reps=reps, environment=_environment_note())
    for k in k_values:
        if n_users < k:
            raise Error(f"n_users={n_users} below threshold k={k}")
        secret = rng.randrange(p)
        coeffs = [rng.randrange(1, p) for _ in range(k - 1)]
        split_s = _median_seconds(
            lambda: split_secret(secret, coeffs, n_users, modulus), reps)
        shares = split_secret(secret, coeffs, n_users, modulus)[:k]
        inp = ReconstructionInput(points=tuple(shares), modulus=modulus)
        rec_s = _median_seconds(lambda: reconstruct_secret(inp), reps)
        report.rows.append(AttrBenchRow(k=k, n_users=n_users,
                                        split_seconds=split_s,
                                        reconstruct_seconds=rec_s))
    ks = [r.k for r in report.rows]
    ts = [r.split_seconds for r in report.rows]
    mean_k = sum(ks) / len(ks)
    mean_t = sum(ts) / len(ts)
    den = sum((k - mean_k) ** 2 for k in ks)
    slope = sum((k - mean_k) * (t - mean_t) for k, t in zip(ks, ts)) / den
    intercept = mean_t - slope * mean_k
    residual = (sum((t - (slope * k + intercept)) ** 2
                    for k, t in zip(ks, ts)) / len(ks)) ** 0.5
    report.split_fit_slope = slope
    report.split_fit_intercept = intercept
    report.split_fit_residual = residual
    return report


# ---------------------------------------------------------------------------
# Storage-overhead model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StorageOverheadModel:
    """Closed-form storage costs for this scheme and two published baselines.

    n_attrs_user: attributes per user (n); policy_attrs: attributes in
    the access policy (t_c).  Baseline parameters default to the same
    counts: n_aa authority attributes (DAC-MACS), m and k_c for the
    pairing-based scheme's user and policy sides.
    """

    n_attrs_user: int = 10
    policy_attrs: int = 10
    element_bits: int = 256
    pairing_bits: int = 512
    n_aa: "int | None" = None
    m: "int | None" = None
    k_c: "int | None" = None

    def user_storage_bits(self) -> int:
        """This scheme, per user: (n + 1) field elements."""
        return (self.n_attrs_user + 1) * self.element_bits

    def server_storage_bits(self) -> int:
        """This scheme, server side: (t_c + 1) field elements."""
        return (self.policy_attrs + 1) * self.element_bits

    def dacmacs_user_bits(self) -> int:
        return ((self.n_aa if self.n_aa is not None else self.n_attrs_user) + 3) \
            * self.element_bits

    def dacmacs_server_bits(self) -> int:
        return (3 * self.policy_attrs + 3) * self.element_bits

    def pairing_user_bits(self) -> int:
        return ((self.m if self.m is not None else self.n_attrs_user) + 1) \
            * self.pairing_bits

    def pairing_server_bits(self) -> int:
        return ((self.k_c if self.k_c is not None else self.policy_attrs) + 1) \
            * self.pairing_bits


@dataclass
class StorageOverheadReport:
    model: StorageOverheadModel
    rows: List[dict] = field(default_factory=list)
    measured_share_record_bytes: int = 0
    measured_grant_bytes: int = 0

    def to_dict(self) -> dict:
        return {
            "model": {
                "n_attrs_user": self.model.n_attrs_user,
                "policy_attrs": self.model.policy_attrs,
                "element_bits": self.model.element_bits,
                "pairing_bits": self.model.pairing_bits,
            },
            "rows": self.rows,
            "measured": {
                "share_record_bytes": self.measured_share_record_bytes,
                "grant_bytes": self.measured_grant_bytes,
            },
        }

    def lines(self) -> List[str]:
        out = [f"{'scheme':12s} {'user bits':>10s} {'user bytes':>10s} "
               f"{'server bits':>11s} {'server bytes':>12s}"]
        for r in self.rows:
            out.append(f"{r['scheme']:12s} {r['user_bits']:>10d} "
                       f"{r['user_bytes']:>10d} {r['server_bits']:>11d} "
                       f"{r['server_bytes']:>12d}")
        out.append(f"measured share record: {self.measured_share_record_bytes} B, "
                   f"grant: {self.measured_grant_bytes} B (JSON)")
        return out


def storage_overhead_report(model: "StorageOverheadModel | None" = None,
                            ) -> StorageOverheadReport:
    """Formula table plus measured sizes from an actual serialized grant."""
    if model is None:
        model = StorageOverheadModel()
    report = StorageOverheadReport(model=model)
    for scheme, user_bits, server_bits in (
        ("proposed", model.user_storage_bits(), model.server_storage_bits()),
        ("dac-macs", model.dacmacs_user_bits(), model.dacmacs_server_bits()),
        ("pairing", model.pairing_user_bits(), model.pairing_server_bits()),
    ):
        report.rows.append({
            "scheme": scheme,
            "user_bits": user_bits,
            "user_bytes": user_bits // 8,
            "server_bits": server_bits,
            "server_bytes": server_bits // 8,
        })

    db = PolicyDb()
    store = ObjectStore()
    owner = UserRecord("owner-0", UserType.OWNER, b"owner-credentials")
    consumer = UserRecord("consumer-0", UserType.CONSUMER, b"consumer-credentials")
    register_user(db, owner)
    register_user(db, consumer)
    grant_access(db, store, "sample.dat", owner, [consumer], b"sample payload")
    grant = db.grants["sample.dat"]
    record = next(iter(grant.consumer_shares.values()))
    report.measured_share_record_bytes = len(record.to_json().encode("utf-8"))
    grant_doc = json.loads(db_grant_json(grant))
    report.measured_grant_bytes = len(json.dumps(grant_doc).encode("utf-8"))
    return report


def db_grant_json(grant) -> str:
    """One grant in the policy schema, for size measurement."""
    return json.dumps({
        "file_id": grant.file_id,
        "owner_id": grant.owner_id,
        "server_share": {"x": grant.server_share.x, "y": grant.server_share.y},
        "consumers": {uid: rec.to_dict()
                      for uid, rec in grant.consumer_shares.items()},
        "kc": grant.binding.kc,
        "x_kc": grant.binding.x_kc,
        "salt_hex": grant.salt.hex(),
        "envelope_ref": grant.envelope_ref,
    })
