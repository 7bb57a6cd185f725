"""
Benchmarks and the storage-overhead model
=========================================

The bench module re-checks the pinned worked example, times seal/open
and split/reconstruct, and tabulates closed-form storage costs against
two published baselines.
"""

from trishare import (
    bench_attributes,
    bench_encrypt,
    storage_overhead_report,
    verify_reference_example,
)

# Eight pinned assertions: six share points, the secret, the
# coefficient vector.  Any drift raises ExampleMismatch.
report = verify_reference_example()
for line in report.lines():
    print(line)

# Seal/open throughput over a few sizes (medians of 5 reps).
print("\nencrypt bench (additive):")
enc = bench_encrypt(sizes=(5 * 1024, 10 * 1024, 20 * 1024), reps=5)
print(enc.to_csv().rstrip())

# Split/reconstruct as the threshold k grows, with a linear fit on the
# split times.
print("\nattribute bench:")
attrs = bench_attributes(k_values=(3, 5, 9, 13), n_users=16, reps=5)
print(attrs.to_csv().rstrip())
print(f"split fit: slope {attrs.split_fit_slope:.3e} s/k, "
      f"residual {attrs.split_fit_residual:.3e} s")

# Storage formulas: (n+1)|p| per user here versus the baselines, plus
# actual measured JSON sizes from a real in-memory grant.
print("\nstorage overhead:")
for line in storage_overhead_report().lines():
    print(line)
