use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use pqbench::dilithium::{Dilithium, DilithiumLevel, SigningMode};
use pqbench::kyber::{Kyber, KyberLevel};
use pqbench::Backend;
use pqbench_ffi::*;

struct Kem(*mut PqbKem);

impl Kem {
    fn new(level: u32, backend: PqbBackend) -> Self {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { pqb_kem_new(level, backend, &mut h) }, PqbStatus::Ok);
        Kem(h)
    }
}

impl Drop for Kem {
    fn drop(&mut self) {
        unsafe { pqb_kem_free(self.0) }
    }
}

struct Sig(*mut PqbSig);

impl Sig {
    fn new(level: u32, backend: PqbBackend) -> Self {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { pqb_sig_new(level, backend, &mut h) }, PqbStatus::Ok);
        Sig(h)
    }
}

impl Drop for Sig {
    fn drop(&mut self) {
        unsafe { pqb_sig_free(self.0) }
    }
}

fn backends() -> Vec<PqbBackend> {
    let mut v = vec![PqbBackend::Reference];
    if pqb_accelerated_available() {
        v.push(PqbBackend::Accelerated);
    }
    v
}

#[test]
fn kem_matches_core_api() {
    for level in KyberLevel::ALL {
        let core = Kyber::new(level, Backend::Reference).unwrap();
        let (d, z, m) = ([1u8; 32], [2u8; 32], [3u8; 32]);
        let kp = core.keygen(&d, &z).unwrap();
        let (ct, ss) = core.encapsulate(kp.public.as_bytes(), &m).unwrap();
        for b in backends() {
            let kem = Kem::new(level.number(), b);
            let p = core.params();
            let (mut pk, mut sk) = (vec![0u8; p.public_key_bytes()], vec![0u8; p.secret_key_bytes()]);
            unsafe {
                assert_eq!(pqb_kem_public_key_bytes(kem.0), pk.len());
                assert_eq!(pqb_kem_secret_key_bytes(kem.0), sk.len());
                assert_eq!(pqb_kem_ciphertext_bytes(kem.0), p.ciphertext_bytes());
                let st = pqb_kem_keypair_derand(kem.0, d.as_ptr(), z.as_ptr(), pk.as_mut_ptr(), pk.len(), sk.as_mut_ptr(), sk.len());
                assert_eq!(st, PqbStatus::Ok);
            }
            assert_eq!((pk.as_slice(), sk.as_slice()), (kp.public.as_bytes(), kp.secret.as_bytes()));
            let (mut c, mut k) = (vec![0u8; p.ciphertext_bytes()], [0u8; PQB_SHARED_SECRET_BYTES]);
            let st = unsafe {
                pqb_kem_encapsulate_derand(kem.0, pk.as_ptr(), pk.len(), m.as_ptr(), c.as_mut_ptr(), c.len(), k.as_mut_ptr())
            };
            assert_eq!(st, PqbStatus::Ok);
            assert_eq!((c.as_slice(), &k), (ct.as_bytes(), ss.as_bytes()));
            let mut k2 = [0u8; PQB_SHARED_SECRET_BYTES];
            let st = unsafe { pqb_kem_decapsulate(kem.0, sk.as_ptr(), sk.len(), c.as_ptr(), c.len(), k2.as_mut_ptr()) };
            assert_eq!((st, k2), (PqbStatus::Ok, k));
        }
    }
}

#[test]
fn kem_random_roundtrip() {
    for level in [512, 768, 1024] {
        let kem = Kem::new(level, PqbBackend::Reference);
        let (pk_len, sk_len, ct_len) =
            unsafe { (pqb_kem_public_key_bytes(kem.0), pqb_kem_secret_key_bytes(kem.0), pqb_kem_ciphertext_bytes(kem.0)) };
        let (mut pk, mut sk, mut ct) = (vec![0u8; pk_len], vec![0u8; sk_len], vec![0u8; ct_len]);
        let (mut a, mut b) = ([0u8; 32], [0u8; 32]);
        unsafe {
            assert_eq!(pqb_kem_keypair(kem.0, pk.as_mut_ptr(), pk_len, sk.as_mut_ptr(), sk_len), PqbStatus::Ok);
            assert_eq!(pqb_kem_encapsulate(kem.0, pk.as_ptr(), pk_len, ct.as_mut_ptr(), ct_len, a.as_mut_ptr()), PqbStatus::Ok);
            assert_eq!(pqb_kem_decapsulate(kem.0, sk.as_ptr(), sk_len, ct.as_ptr(), ct_len, b.as_mut_ptr()), PqbStatus::Ok);
        }
        assert_eq!(a, b);
    }
}

#[test]
fn sig_matches_core_api() {
    for level in DilithiumLevel::ALL {
        let core = Dilithium::new(level, Backend::Reference).unwrap();
        let seed = [5u8; 32];
        let msg = b"message under test";
        let rnd = [6u8; 32];
        let kp = core.keygen(&seed).unwrap();
        let det = core.sign(kp.secret.as_bytes(), msg, SigningMode::Deterministic).unwrap();
        let hedged = core.sign(kp.secret.as_bytes(), msg, SigningMode::Randomized(&rnd)).unwrap();
        for b in backends() {
            let dsa = Sig::new(level.number(), b);
            let p = core.params();
            let (mut pk, mut sk) = (vec![0u8; p.public_key_bytes()], vec![0u8; p.secret_key_bytes()]);
            let mut sig = vec![0u8; p.signature_bytes()];
            unsafe {
                assert_eq!(pqb_sig_signature_bytes(dsa.0), sig.len());
                let st = pqb_sig_keypair_derand(dsa.0, seed.as_ptr(), pk.as_mut_ptr(), pk.len(), sk.as_mut_ptr(), sk.len());
                assert_eq!(st, PqbStatus::Ok);
                assert_eq!((pk.as_slice(), sk.as_slice()), (kp.public.as_bytes(), kp.secret.as_bytes()));
                for (r, want) in [(ptr::null(), &det), (rnd.as_ptr(), &hedged)] {
                    let st = pqb_sig_sign(dsa.0, sk.as_ptr(), sk.len(), msg.as_ptr(), msg.len(), r, sig.as_mut_ptr(), sig.len());
                    assert_eq!(st, PqbStatus::Ok);
                    assert_eq!(sig.as_slice(), want.as_bytes());
                    let st = pqb_sig_verify(dsa.0, pk.as_ptr(), pk.len(), msg.as_ptr(), msg.len(), sig.as_ptr(), sig.len());
                    assert_eq!(st, PqbStatus::Ok);
                }
                sig[7] ^= 0x10;
                let st = pqb_sig_verify(dsa.0, pk.as_ptr(), pk.len(), msg.as_ptr(), msg.len(), sig.as_ptr(), sig.len());
                assert_eq!(st, PqbStatus::VerifyFailed);
            }
        }
    }
}

#[test]
fn empty_message_may_be_null() {
    let dsa = Sig::new(2, PqbBackend::Reference);
    let (pk_len, sk_len, sig_len) =
        unsafe { (pqb_sig_public_key_bytes(dsa.0), pqb_sig_secret_key_bytes(dsa.0), pqb_sig_signature_bytes(dsa.0)) };
    let (mut pk, mut sk, mut sig) = (vec![0u8; pk_len], vec![0u8; sk_len], vec![0u8; sig_len]);
    unsafe {
        assert_eq!(pqb_sig_keypair(dsa.0, pk.as_mut_ptr(), pk_len, sk.as_mut_ptr(), sk_len), PqbStatus::Ok);
        let st = pqb_sig_sign(dsa.0, sk.as_ptr(), sk_len, ptr::null(), 0, ptr::null(), sig.as_mut_ptr(), sig_len);
        assert_eq!(st, PqbStatus::Ok);
        let st = pqb_sig_verify(dsa.0, pk.as_ptr(), pk_len, ptr::null(), 0, sig.as_ptr(), sig_len);
        assert_eq!(st, PqbStatus::Ok);
    }
}

#[test]
fn error_codes() {
    let mut h: *mut PqbKem = ptr::null_mut();
    unsafe {
        assert_eq!(pqb_kem_new(1000, PqbBackend::Reference, &mut h), PqbStatus::InvalidArgument);
        assert!(h.is_null());
        assert_eq!(pqb_kem_new(512, PqbBackend::Reference, ptr::null_mut()), PqbStatus::NullPointer);
        let mut s: *mut PqbSig = ptr::null_mut();
        assert_eq!(pqb_sig_new(4, PqbBackend::Reference, &mut s), PqbStatus::InvalidArgument);
        if !pqb_accelerated_available() {
            assert_eq!(pqb_kem_new(512, PqbBackend::Accelerated, &mut h), PqbStatus::BackendUnavailable);
        }
        assert_eq!(pqb_kem_public_key_bytes(ptr::null()), 0);
        pqb_kem_free(ptr::null_mut());
        pqb_sig_free(ptr::null_mut());
    }

    let kem = Kem::new(768, PqbBackend::Reference);
    let (pk_len, sk_len) = unsafe { (pqb_kem_public_key_bytes(kem.0), pqb_kem_secret_key_bytes(kem.0)) };
    let (mut pk, mut sk) = (vec![0u8; pk_len], vec![0u8; sk_len]);
    let seed = [0u8; 32];
    unsafe {
        let short = pqb_kem_keypair_derand(kem.0, seed.as_ptr(), seed.as_ptr(), pk.as_mut_ptr(), pk_len - 1, sk.as_mut_ptr(), sk_len);
        assert_eq!(short, PqbStatus::InvalidLength);
        let null_seed = pqb_kem_keypair_derand(kem.0, ptr::null(), seed.as_ptr(), pk.as_mut_ptr(), pk_len, sk.as_mut_ptr(), sk_len);
        assert_eq!(null_seed, PqbStatus::NullPointer);
        let null_out = pqb_kem_keypair(kem.0, ptr::null_mut(), pk_len, sk.as_mut_ptr(), sk_len);
        assert_eq!(null_out, PqbStatus::NullPointer);
        let null_handle = pqb_kem_keypair(ptr::null(), pk.as_mut_ptr(), pk_len, sk.as_mut_ptr(), sk_len);
        assert_eq!(null_handle, PqbStatus::NullPointer);
    }
    assert!(pk.iter().all(|&b| b == 0), "failed calls leave outputs untouched");
}

#[test]
fn status_messages_are_distinct_c_strings() {
    let all = [
        PqbStatus::Ok,
        PqbStatus::NullPointer,
        PqbStatus::InvalidLength,
        PqbStatus::InvalidArgument,
        PqbStatus::BackendUnavailable,
        PqbStatus::RejectionLimit,
        PqbStatus::VerifyFailed,
        PqbStatus::Internal,
    ];
    let msgs: Vec<String> = all
        .iter()
        .map(|&s| unsafe { CStr::from_ptr(pqb_status_message(s)) }.to_str().unwrap().to_owned())
        .collect();
    for (i, m) in msgs.iter().enumerate() {
        assert!(!m.is_empty());
        assert!(msgs[i + 1..].iter().all(|o| o != m));
    }
}

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/pqbench.h")).unwrap();
    let src = std::fs::read_to_string(crate_dir().join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 20);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    for item in ["typedef struct PqbKem PqbKem;", "typedef struct PqbSig PqbSig;", "PQB_STATUS_VERIFY_FAILED = 6"] {
        assert!(header.contains(item), "{item} missing from header");
    }
}

/// The static library next to this test binary, when cargo built one.
fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let lib = exe.parent()?.parent()?.join("libpqbench_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_and_runs() {
    let (Some(lib), Ok(true)) = (static_lib(), Command::new("cc").arg("--version").output().map(|o| o.status.success()))
    else {
        eprintln!("skipping: no C compiler or static library");
        return;
    };
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("pqbench_smoke");
    // Workspace builds unify features, so the archive may carry the core
    // crate's OpenSSL baselines.
    let archive = std::fs::read(&lib).unwrap();
    let needs_openssl = archive.windows(13).any(|w| w == b"EVP_PKEY_free");
    let status = Command::new("cc")
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg(&lib)
        .args(if needs_openssl { &["-lssl", "-lcrypto"][..] } else { &[] })
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke test failed to compile");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
