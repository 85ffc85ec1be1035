//! C ABI over the Kyber KEM and Dilithium signatures.
//!
//! Schemes are reached through opaque handles created by `pqb_kem_new` and
//! `pqb_sig_new` and released with the matching `_free`. Every fallible call
//! returns a [`PqbStatus`]; outputs are written only on `PQB_STATUS_OK`.
//! Buffers are `(pointer, length)` pairs whose length must equal the size
//! reported by the handle. A null pointer is accepted only with length 0.
//! Panics never cross the boundary; they surface as `PQB_STATUS_INTERNAL`.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use pqbench::dilithium::{Dilithium, DilithiumLevel, SigningMode};
use pqbench::kyber::{Kyber, KyberLevel, SHARED_SECRET_BYTES};
use pqbench::{Backend, Error};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PqbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidLength = 2,
    InvalidArgument = 3,
    BackendUnavailable = 4,
    RejectionLimit = 5,
    VerifyFailed = 6,
    Internal = 7,
}

/// Implementation of the lattice arithmetic. Both produce identical bytes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PqbBackend {
    Reference = 0,
    Accelerated = 1,
}

/// Byte length of a Kyber shared secret.
pub const PQB_SHARED_SECRET_BYTES: usize = 32;
const _: () = assert!(PQB_SHARED_SECRET_BYTES == SHARED_SECRET_BYTES);
/// Byte length of every seed and of the hedging randomness.
pub const PQB_SEED_BYTES: usize = 32;

/// Kyber at one level on one backend.
pub struct PqbKem {
    kem: Kyber,
}

/// Dilithium at one level on one backend.
pub struct PqbSig {
    dsa: Dilithium,
}

type Status<T> = Result<T, PqbStatus>;

impl From<Error> for PqbStatus {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidLength { .. } => PqbStatus::InvalidLength,
            Error::InvalidParameter(_) | Error::Unsupported { .. } => PqbStatus::InvalidArgument,
            Error::BackendUnavailable => PqbStatus::BackendUnavailable,
            Error::RejectionLimit(_) => PqbStatus::RejectionLimit,
            _ => PqbStatus::Internal,
        }
    }
}

impl From<PqbBackend> for Backend {
    fn from(b: PqbBackend) -> Self {
        match b {
            PqbBackend::Reference => Backend::Reference,
            PqbBackend::Accelerated => Backend::Accelerated,
        }
    }
}

fn guard(f: impl FnOnce() -> Status<()>) -> PqbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PqbStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => PqbStatus::Internal,
    }
}

/// # Safety
/// `ptr` must be null or valid for `len` reads.
unsafe fn input<'a>(ptr: *const u8, len: usize) -> Status<&'a [u8]> {
    match (ptr.is_null(), len) {
        (_, 0) => Ok(&[]),
        (true, _) => Err(PqbStatus::NullPointer),
        // SAFETY: non-null and valid for `len` reads per the caller contract.
        (false, _) => Ok(unsafe { std::slice::from_raw_parts(ptr, len) }),
    }
}

/// # Safety
/// `ptr` must be null or valid for `len` writes.
unsafe fn output<'a>(ptr: *mut u8, len: usize) -> Status<&'a mut [u8]> {
    match (ptr.is_null(), len) {
        (_, 0) => Ok(&mut []),
        (true, _) => Err(PqbStatus::NullPointer),
        // SAFETY: non-null and valid for `len` writes per the caller contract.
        (false, _) => Ok(unsafe { std::slice::from_raw_parts_mut(ptr, len) }),
    }
}

/// # Safety
/// `ptr` must be null or valid for `N` reads.
unsafe fn fixed<'a, const N: usize>(ptr: *const u8) -> Status<&'a [u8; N]> {
    // SAFETY: forwarded caller contract.
    let s = unsafe { input(ptr, N) }?;
    Ok(s.try_into().expect("length is N"))
}

/// # Safety
/// `handle` must be null or a live handle from the matching constructor.
unsafe fn borrow<'a, T>(handle: *const T) -> Status<&'a T> {
    // SAFETY: forwarded caller contract.
    unsafe { handle.as_ref() }.ok_or(PqbStatus::NullPointer)
}

fn exact(expected: usize, got: usize) -> Status<()> {
    if expected == got {
        Ok(())
    } else {
        Err(PqbStatus::InvalidLength)
    }
}

/// Static, NUL-terminated description of `status`.
#[no_mangle]
pub extern "C" fn pqb_status_message(status: PqbStatus) -> *const c_char {
    let msg = match status {
        PqbStatus::Ok => c"ok",
        PqbStatus::NullPointer => c"null pointer with nonzero length",
        PqbStatus::InvalidLength => c"buffer length does not match the scheme",
        PqbStatus::InvalidArgument => c"invalid argument",
        PqbStatus::BackendUnavailable => c"the accelerated backend is not available on this CPU",
        PqbStatus::RejectionLimit => c"signing exceeded its rejection limit",
        PqbStatus::VerifyFailed => c"signature verification failed",
        PqbStatus::Internal => c"internal error",
    };
    msg.as_ptr()
}

/// True when the accelerated backend can run on this CPU.
#[no_mangle]
pub extern "C" fn pqb_accelerated_available() -> bool {
    pqbench::accelerated_available()
}

/// Creates a Kyber handle for `level` 512, 768 or 1024.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn pqb_kem_new(level: u32, backend: PqbBackend, out: *mut *mut PqbKem) -> PqbStatus {
    guard(|| {
        if out.is_null() {
            return Err(PqbStatus::NullPointer);
        }
        let level = KyberLevel::ALL
            .into_iter()
            .find(|l| l.number() == level)
            .ok_or(PqbStatus::InvalidArgument)?;
        let kem = Kyber::new(level, backend.into())?;
        // SAFETY: checked non-null; valid per the caller contract.
        unsafe { *out = Box::into_raw(Box::new(PqbKem { kem })) };
        Ok(())
    })
}

/// Releases a handle from `pqb_kem_new`. Null is ignored.
///
/// # Safety
/// `kem` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pqb_kem_free(kem: *mut PqbKem) {
    if !kem.is_null() {
        // SAFETY: produced by Box::into_raw in pqb_kem_new and freed once.
        drop(unsafe { Box::from_raw(kem) });
    }
}

/// # Safety
/// `kem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pqb_kem_public_key_bytes(kem: *const PqbKem) -> usize {
    // SAFETY: forwarded caller contract.
    unsafe { borrow(kem) }.map_or(0, |k| k.kem.params().public_key_bytes())
}

/// # Safety
/// `kem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pqb_kem_secret_key_bytes(kem: *const PqbKem) -> usize {
    // SAFETY: forwarded caller contract.
    unsafe { borrow(kem) }.map_or(0, |k| k.kem.params().secret_key_bytes())
}

/// # Safety
/// `kem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pqb_kem_ciphertext_bytes(kem: *const PqbKem) -> usize {
    // SAFETY: forwarded caller contract.
    unsafe { borrow(kem) }.map_or(0, |k| k.kem.params().ciphertext_bytes())
}

/// Deterministic key pair from the 32-byte seeds `d` and `z`.
///
/// # Safety
/// Pointers must be valid for their stated lengths; `d` and `z` for 32 bytes.
#[no_mangle]
pub unsafe extern "C" fn pqb_kem_keypair_derand(
    kem: *const PqbKem,
    d: *const u8,
    z: *const u8,
    pk: *mut u8,
    pk_len: usize,
    sk: *mut u8,
    sk_len: usize,
) -> PqbStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let (kem, d, z) = unsafe { (borrow(kem)?, fixed::<32>(d)?, fixed::<32>(z)?) };
        let p = kem.kem.params();
        exact(p.public_key_bytes(), pk_len)?;
        exact(p.secret_key_bytes(), sk_len)?;
        // SAFETY: forwarded caller contract.
        let (pk, sk) = unsafe { (output(pk, pk_len)?, output(sk, sk_len)?) };
        kem.kem.keygen_into(d, z, pk, sk)?;
        Ok(())
    })
}

/// Key pair from operating-system randomness.
///
/// # Safety
/// Pointers must be valid for their stated lengths.
#[no_mangle]
pub unsafe extern "C" fn pqb_kem_keypair(
    kem: *const PqbKem,
    pk: *mut u8,
    pk_len: usize,
    sk: *mut u8,
    sk_len: usize,
) -> PqbStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let kem = unsafe { borrow(kem)? };
        let p = kem.kem.params();
        exact(p.public_key_bytes(), pk_len)?;
        exact(p.secret_key_bytes(), sk_len)?;
        // SAFETY: forwarded caller contract.
        let (pk, sk) = unsafe { (output(pk, pk_len)?, output(sk, sk_len)?) };
        let kp = kem.kem.keygen_random()?;
        pk.copy_from_slice(kp.public.as_bytes());
        sk.copy_from_slice(kp.secret.as_bytes());
        Ok(())
    })
}

/// Deterministic encapsulation with the 32-byte coins `m`; `ss` receives
/// `PQB_SHARED_SECRET_BYTES`.
///
/// # Safety
/// Pointers must be valid for their stated lengths.
#[no_mangle]
pub unsafe extern "C" fn pqb_kem_encapsulate_derand(
    kem: *const PqbKem,
    pk: *const u8,
    pk_len: usize,
    m: *const u8,
    ct: *mut u8,
    ct_len: usize,
    ss: *mut u8,
) -> PqbStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let (kem, pk, m) = unsafe { (borrow(kem)?, input(pk, pk_len)?, fixed::<32>(m)?) };
        exact(kem.kem.params().public_key_bytes(), pk_len)?;
        exact(kem.kem.params().ciphertext_bytes(), ct_len)?;
        // SAFETY: forwarded caller contract.
        let (ct, ss) = unsafe { (output(ct, ct_len)?, output(ss, SHARED_SECRET_BYTES)?) };
        let ss: &mut [u8; SHARED_SECRET_BYTES] = ss.try_into().expect("shared secret length");
        kem.kem.encapsulate_into(pk, m, ct, ss)?;
        Ok(())
    })
}

/// Encapsulation with coins from operating-system randomness.
///
/// # Safety
/// Pointers must be valid for their stated lengths.
#[no_mangle]
pub unsafe extern "C" fn pqb_kem_encapsulate(
    kem: *const PqbKem,
    pk: *const u8,
    pk_len: usize,
    ct: *mut u8,
    ct_len: usize,
    ss: *mut u8,
) -> PqbStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let (kem, pk) = unsafe { (borrow(kem)?, input(pk, pk_len)?) };
        exact(kem.kem.params().public_key_bytes(), pk_len)?;
        exact(kem.kem.params().ciphertext_bytes(), ct_len)?;
        // SAFETY: forwarded caller contract.
        let (ct, ss) = unsafe { (output(ct, ct_len)?, output(ss, SHARED_SECRET_BYTES)?) };
        let (c, k) = kem.kem.encapsulate_random(pk)?;
        ct.copy_from_slice(c.as_bytes());
        ss.copy_from_slice(k.as_bytes());
        Ok(())
    })
}

/// Recovers the shared secret. A well-sized but invalid ciphertext still
/// succeeds and yields the implicit-rejection secret.
///
/// # Safety
/// Pointers must be valid for their stated lengths.
#[no_mangle]
pub unsafe extern "C" fn pqb_kem_decapsulate(
    kem: *const PqbKem,
    sk: *const u8,
    sk_len: usize,
    ct: *const u8,
    ct_len: usize,
    ss: *mut u8,
) -> PqbStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let (kem, sk, ct) = unsafe { (borrow(kem)?, input(sk, sk_len)?, input(ct, ct_len)?) };
        exact(kem.kem.params().secret_key_bytes(), sk_len)?;
        exact(kem.kem.params().ciphertext_bytes(), ct_len)?;
        // SAFETY: forwarded caller contract.
        let ss = unsafe { output(ss, SHARED_SECRET_BYTES)? };
        ss.copy_from_slice(kem.kem.decapsulate(sk, ct)?.as_bytes());
        Ok(())
    })
}

/// Creates a Dilithium handle for `level` 2, 3 or 5.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn pqb_sig_new(level: u32, backend: PqbBackend, out: *mut *mut PqbSig) -> PqbStatus {
    guard(|| {
        if out.is_null() {
            return Err(PqbStatus::NullPointer);
        }
        let level = DilithiumLevel::ALL
            .into_iter()
            .find(|l| l.number() == level)
            .ok_or(PqbStatus::InvalidArgument)?;
        let dsa = Dilithium::new(level, backend.into())?;
        // SAFETY: checked non-null; valid per the caller contract.
        unsafe { *out = Box::into_raw(Box::new(PqbSig { dsa })) };
        Ok(())
    })
}

/// Releases a handle from `pqb_sig_new`. Null is ignored.
///
/// # Safety
/// `sig` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pqb_sig_free(sig: *mut PqbSig) {
    if !sig.is_null() {
        // SAFETY: produced by Box::into_raw in pqb_sig_new and freed once.
        drop(unsafe { Box::from_raw(sig) });
    }
}

/// # Safety
/// `sig` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pqb_sig_public_key_bytes(sig: *const PqbSig) -> usize {
    // SAFETY: forwarded caller contract.
    unsafe { borrow(sig) }.map_or(0, |s| s.dsa.params().public_key_bytes())
}

/// # Safety
/// `sig` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pqb_sig_secret_key_bytes(sig: *const PqbSig) -> usize {
    // SAFETY: forwarded caller contract.
    unsafe { borrow(sig) }.map_or(0, |s| s.dsa.params().secret_key_bytes())
}

/// # Safety
/// `sig` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pqb_sig_signature_bytes(sig: *const PqbSig) -> usize {
    // SAFETY: forwarded caller contract.
    unsafe { borrow(sig) }.map_or(0, |s| s.dsa.params().signature_bytes())
}

/// Deterministic key pair from a 32-byte seed.
///
/// # Safety
/// Pointers must be valid for their stated lengths; `seed` for 32 bytes.
#[no_mangle]
pub unsafe extern "C" fn pqb_sig_keypair_derand(
    sig: *const PqbSig,
    seed: *const u8,
    pk: *mut u8,
    pk_len: usize,
    sk: *mut u8,
    sk_len: usize,
) -> PqbStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let (s, seed) = unsafe { (borrow(sig)?, fixed::<32>(seed)?) };
        exact(s.dsa.params().public_key_bytes(), pk_len)?;
        exact(s.dsa.params().secret_key_bytes(), sk_len)?;
        // SAFETY: forwarded caller contract.
        let (pk, sk) = unsafe { (output(pk, pk_len)?, output(sk, sk_len)?) };
        s.dsa.keygen_into(seed, pk, sk)?;
        Ok(())
    })
}

/// Key pair from operating-system randomness.
///
/// # Safety
/// Pointers must be valid for their stated lengths.
#[no_mangle]
pub unsafe extern "C" fn pqb_sig_keypair(
    sig: *const PqbSig,
    pk: *mut u8,
    pk_len: usize,
    sk: *mut u8,
    sk_len: usize,
) -> PqbStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let s = unsafe { borrow(sig)? };
        exact(s.dsa.params().public_key_bytes(), pk_len)?;
        exact(s.dsa.params().secret_key_bytes(), sk_len)?;
        // SAFETY: forwarded caller contract.
        let (pk, sk) = unsafe { (output(pk, pk_len)?, output(sk, sk_len)?) };
        let kp = s.dsa.keygen_random()?;
        pk.copy_from_slice(kp.public.as_bytes());
        sk.copy_from_slice(kp.secret.as_bytes());
        Ok(())
    })
}

/// Signs `msg`. With `rnd` null the signature is deterministic; otherwise the
/// 32 bytes at `rnd` hedge the mask seed.
///
/// # Safety
/// Pointers must be valid for their stated lengths; `rnd` null or 32 bytes.
#[no_mangle]
pub unsafe extern "C" fn pqb_sig_sign(
    sig: *const PqbSig,
    sk: *const u8,
    sk_len: usize,
    msg: *const u8,
    msg_len: usize,
    rnd: *const u8,
    out: *mut u8,
    out_len: usize,
) -> PqbStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let (s, sk, msg) = unsafe { (borrow(sig)?, input(sk, sk_len)?, input(msg, msg_len)?) };
        let mode = if rnd.is_null() {
            SigningMode::Deterministic
        } else {
            // SAFETY: forwarded caller contract.
            SigningMode::Randomized(unsafe { fixed::<32>(rnd)? })
        };
        exact(s.dsa.params().secret_key_bytes(), sk_len)?;
        exact(s.dsa.params().signature_bytes(), out_len)?;
        // SAFETY: forwarded caller contract.
        let out = unsafe { output(out, out_len)? };
        s.dsa.sign_into(sk, msg, mode, out)?;
        Ok(())
    })
}

/// `PQB_STATUS_OK` for a valid signature, `PQB_STATUS_VERIFY_FAILED` for an
/// invalid one.
///
/// # Safety
/// Pointers must be valid for their stated lengths.
#[no_mangle]
pub unsafe extern "C" fn pqb_sig_verify(
    sig: *const PqbSig,
    pk: *const u8,
    pk_len: usize,
    msg: *const u8,
    msg_len: usize,
    signature: *const u8,
    signature_len: usize,
) -> PqbStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let (s, pk, msg, signature) = unsafe {
            (
                borrow(sig)?,
                input(pk, pk_len)?,
                input(msg, msg_len)?,
                input(signature, signature_len)?,
            )
        };
        exact(s.dsa.params().public_key_bytes(), pk_len)?;
        exact(s.dsa.params().signature_bytes(), signature_len)?;
        if s.dsa.verify(pk, msg, signature) {
            Ok(())
        } else {
            Err(PqbStatus::VerifyFailed)
        }
    })
}
