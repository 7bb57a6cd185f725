"""
LCG keystreams and the two-stream XOR mask
==========================================

Before any substitution cipher runs, plaintext is XOR-masked with
K = N1 xor N2: N1 is a fresh bit per position, N2 a short pattern
redrawn every block and tiled across it.
"""

from trishare import (
    Lcg,
    LcgParams,
    MaskSchedule,
    REFERENCE_RAND,
    REFERENCE_REP,
    lcg_bits,
    mask_rand,
    mask_rep,
    monobit_check,
    recommended_rand,
    xor_mask,
)

# The reference parameter set: X0 = 9741, a = 1674, c = 1234, m = 231.
# First state is (1674 * 9741 + 1234) mod 231 = 223, so the first
# emitted parity bit is 1.
gen = Lcg(REFERENCE_RAND)
print(f"reference stream first state: {gen.step()}")
print(f"first eight bits: {lcg_bits(REFERENCE_RAND, 8)}")

# Parity extraction has a sharp edge: any full-period LCG with a
# power-of-two modulus flips parity every step, giving 0101...  Such a
# stream sails through a monobit test while being useless as a mask.
classic = lcg_bits(recommended_rand(12345), 16)
print(f"\nclassic glibc-style params, bits: {classic}")
print(f"monobit bias over 10^5 bits: "
      f"{monobit_check(lcg_bits(recommended_rand(12345), 100_000)).bias}")

# Mask schedules therefore use Lehmer generators mod 2^31 - 1.
healthy = lcg_bits(mask_rand(12345), 16)
print(f"mask-profile params, bits:    {healthy}")

# Build a schedule and mask a constant plaintext; the mask structure
# shows through because the input carries no entropy.
schedule = MaskSchedule(
    rand_params=mask_rand(2024),
    rep_params=mask_rep(4048),
    rep_period_bits=64,
    block_bytes=1024,
)
plain = bytes(32)
masked = xor_mask(plain, schedule)
print(f"\nall-zero input  : {plain.hex()}")
print(f"masked output   : {masked.hex()}")
print(f"masked twice    : {xor_mask(masked, schedule).hex()}  (involution)")

# The reference-parameter schedule works the same way, just with the tiny
# moduli from the worked example.
reference_schedule = MaskSchedule(REFERENCE_RAND, REFERENCE_REP,
                              rep_period_bits=64, block_bytes=1024)
body = b"two streams, one mask"
assert xor_mask(xor_mask(body, reference_schedule), reference_schedule) == body
print("\nreference-parameter mask round-trips: ok")
