"""trishare: involution-cipher file sealing with three-party key sharing.

A file is sealed under a fresh secret; the secret is split into points
on a degree-2 polynomial over Z_p so that decryption needs the
organization server, the data owner, and one authorized receiver to each
contribute a point.  Lagrange interpolation recovers the secret, a
binding code ties the polynomial to the file, and revocation
re-randomizes the polynomial without touching the sealed data.
"""

from .errors import Error
from .field import (FieldModulus, InvalidModulus, InvalidPolynomial, M61,
                    SecretPolynomial, ZeroInverse, default_modulus,
                    integer_nth_root, is_prime, mod_inverse, modulus_for,
                    poly_eval)
from .hashing import fnv1a64, mix64
from .keystream import (InvalidParams, Lcg, LcgParams, MaskSchedule,
                        MonobitStats, REFERENCE_RAND, REFERENCE_REP, TooFewBits,
                        lcg_bits, mask_rand, mask_rep, monobit_check,
                        recommended_rand, recommended_rep, xor_mask)
from .cipher import (BadHeader, CipherEnvelope, CipherKey, EmptyFilename,
                     FileKeyBinding, InexactRoot, KeyOutOfRange,
                     LengthMismatch, Mode, SymbolOutOfRange, decrypt_bytes,
                     derive_file_key, encrypt_bytes, file_key_binding,
                     mask_schedule_for_key, open_file, seal_file,
                     symbol_width)
from .sharing import (BindingCode, EncryptedShare, NotEnoughUsers,
                      SecretTooLarge, SharePoint, TooFewAttributes,
                      binding_code, decrypt_share, derive_attribute_tokens,
                      derive_binding_x, encrypt_share, split_secret)
from .interpolate import (DuplicateAbscissa, NotEnoughPoints,
                          ReconstructionInput, TooManyPoints,
                          lagrange_basis_at, reconstruct_polynomial,
                          reconstruct_secret, verify_binding)
from .storage import (ACL_BACKUP_FILENAME, HEADER_BYTES, IoFailure, NotFound,
                      ObjectStore, POLICY_FILENAME, Receipt, Truncated,
                      decode_envelope, encode_envelope, object_key)
from .authz import (BindingMismatch, DuplicateUser, FileGrant,
                    InsufficientPoints, NoConsumers, NotGranted, PolicyDb,
                    RoleMismatch, RoleSlots, THRESHOLD, UnknownFile,
                    UnknownOwner, UnknownUser, UserRecord, UserType,
                    db_from_json, db_to_json, grant_access, load_db,
                    persist_db, register_user, request_decrypt, revoke_user,
                    update_owner_share)
from .bench import (BenchReport, ExampleMismatch, StorageOverheadModel,
                    bench_attributes, bench_encrypt, loglog_slope,
                    storage_overhead_report, verify_reference_example)

__version__ = "0.1.0"
