//! Measurement campaigns: prepared workloads for every scheme operation, the
//! backend-equivalence gate, and report assembly.

use rand::rngs::StdRng;
use rand::{Rng, RngCore, SeedableRng};

use super::clock::Timer;
use super::report::BenchReport;
use super::stats::{measure, measure_interleaved, ClockHz, TimingStats, DEFAULT_ITERATIONS, WARMUP_ITERATIONS};
use super::Workload;
use crate::classical::{self, ClassicalScheme, ProviderHandle, RsaPolicy};
use crate::dilithium::{Dilithium, SigningMode};
use crate::kyber::{Kyber, SHARED_SECRET_BYTES};
use crate::{Backend, Error, PqcOp, PqcScheme, Result};

/// Message length for signing workloads.
pub const MESSAGE_BYTES: usize = 59;
/// Distinct pre-computed inputs cycled through by decapsulation and
/// verification workloads.
const INPUT_POOL: usize = 16;

#[derive(Clone, Copy, Debug)]
pub struct CampaignConfig {
    pub iterations: usize,
    pub warmup: usize,
    pub clock: ClockHz,
    pub timer: Timer,
    pub rsa_policy: RsaPolicy,
    /// Seed for per-iteration inputs; `None` draws one from the OS.
    pub input_seed: Option<u64>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            iterations: DEFAULT_ITERATIONS,
            warmup: WARMUP_ITERATIONS,
            clock: ClockHz::default(),
            timer: Timer::detect(),
            rsa_policy: RsaPolicy::default(),
            input_seed: None,
        }
    }
}

impl CampaignConfig {
    fn rng(&self, salt: u64) -> StdRng {
        match self.input_seed {
            Some(s) => StdRng::seed_from_u64(s ^ salt),
            None => StdRng::from_entropy(),
        }
    }
}

fn random_array<const L: usize>(rng: &mut impl RngCore) -> [u8; L] {
    let mut a = [0u8; L];
    rng.fill_bytes(&mut a);
    a
}

/// Cycles through pre-drawn inputs so no randomness is generated while timing.
struct Cycle<T> {
    items: Vec<T>,
    next: usize,
}

impl<T> Cycle<T> {
    fn new(items: Vec<T>) -> Self {
        Cycle { items, next: 0 }
    }

    #[inline(always)]
    fn advance(&mut self) -> &T {
        let i = self.next;
        self.next = if i + 1 == self.items.len() { 0 } else { i + 1 };
        &self.items[i]
    }
}

/// One invocation performs exactly one `op`. Fresh seeds for `inputs`
/// invocations are drawn up front; decapsulation and verification cycle
/// through a small pool of honestly generated inputs.
pub fn pqc_workload(
    scheme: PqcScheme,
    backend: Backend,
    op: PqcOp,
    inputs: usize,
    rng: &mut impl RngCore,
) -> Result<Workload> {
    if !scheme.ops().contains(&op) {
        return Err(Error::Unsupported {
            scheme: scheme.label(),
            op: op.as_str().into(),
        });
    }
    let inputs = inputs.max(1);
    match scheme {
        PqcScheme::Kyber(level) => {
            let kem = Kyber::new(level, backend)?;
            let p = *kem.params();
            let (mut pk, mut sk) = (vec![0u8; p.public_key_bytes()], vec![0u8; p.secret_key_bytes()]);
            kem.keygen_into(&random_array::<32>(rng), &random_array::<32>(rng), &mut pk, &mut sk)?;
            let mut ct = vec![0u8; p.ciphertext_bytes()];
            let mut ss = [0u8; SHARED_SECRET_BYTES];
            Ok(match op {
                PqcOp::Keygen => {
                    let mut seeds = Cycle::new((0..inputs).map(|_| random_array::<64>(rng)).collect());
                    Workload::new(move || {
                        let s = seeds.advance();
                        kem.keygen_into(&s[..32], &s[32..], &mut pk, &mut sk)
                    })
                }
                PqcOp::Encapsulate => {
                    let mut seeds = Cycle::new((0..inputs).map(|_| random_array::<32>(rng)).collect());
                    Workload::new(move || kem.encapsulate_into(&pk, seeds.advance(), &mut ct, &mut ss))
                }
                _ => {
                    let pool: Vec<Vec<u8>> = (0..INPUT_POOL)
                        .map(|_| kem.encapsulate(&pk, &random_array::<32>(rng)).map(|(c, _)| c.into_bytes()))
                        .collect::<Result<_>>()?;
                    let mut cts = Cycle::new(pool);
                    Workload::new(move || kem.decapsulate_into(&sk, cts.advance(), &mut ct, &mut ss))
                }
            })
        }
        PqcScheme::Dilithium(level) => {
            let dsa = Dilithium::new(level, backend)?;
            let p = *dsa.params();
            let (mut pk, mut sk) = (vec![0u8; p.public_key_bytes()], vec![0u8; p.secret_key_bytes()]);
            dsa.keygen_into(&random_array::<32>(rng), &mut pk, &mut sk)?;
            let mut sig = vec![0u8; p.signature_bytes()];
            Ok(match op {
                PqcOp::Keygen => {
                    let mut seeds = Cycle::new((0..inputs).map(|_| random_array::<32>(rng)).collect());
                    Workload::new(move || dsa.keygen_into(seeds.advance(), &mut pk, &mut sk))
                }
                PqcOp::Sign => {
                    let mut msgs = Cycle::new((0..inputs).map(|_| random_array::<MESSAGE_BYTES>(rng)).collect());
                    Workload::new(move || {
                        dsa.sign_into(&sk, msgs.advance(), SigningMode::Deterministic, &mut sig)
                            .map(drop)
                    })
                }
                _ => {
                    let pool: Vec<([u8; MESSAGE_BYTES], Vec<u8>)> = (0..INPUT_POOL)
                        .map(|_| {
                            let m = random_array::<MESSAGE_BYTES>(rng);
                            dsa.sign(&sk, &m, SigningMode::Deterministic).map(|s| (m, s.into_bytes()))
                        })
                        .collect::<Result<_>>()?;
                    let mut pairs = Cycle::new(pool);
                    Workload::new(move || {
                        let (m, s) = pairs.advance();
                        match dsa.verify(&pk, m, s) {
                            true => Ok(()),
                            false => Err(Error::OperationMismatch("honest signature rejected".into())),
                        }
                    })
                }
            })
        }
    }
}

/// Proof that both backends produced identical output for one scheme. Only
/// [`equivalence_gate`] creates one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Equivalence {
    scheme: PqcScheme,
    seeds: usize,
}

impl Equivalence {
    pub fn scheme(&self) -> PqcScheme {
        self.scheme
    }

    pub fn seeds(&self) -> usize {
        self.seeds
    }
}

fn diverge(scheme: PqcScheme, seed: usize, what: &str) -> Error {
    Error::BackendDivergence {
        scheme: scheme.name().into(),
        detail: format!("{what} differs for seed #{seed}"),
    }
}

/// Runs every operation on both backends for `seeds` shared random inputs
/// and requires byte-identical outputs, including the implicit-rejection
/// path of decapsulation.
pub fn equivalence_gate(scheme: PqcScheme, seeds: usize, rng: &mut impl RngCore) -> Result<Equivalence> {
    if !Backend::Accelerated.is_available() {
        return Err(Error::BackendUnavailable);
    }
    match scheme {
        PqcScheme::Kyber(level) => {
            let (r, a) = (Kyber::new(level, Backend::Reference)?, Kyber::new(level, Backend::Accelerated)?);
            for i in 0..seeds {
                let (d, z, m) = (random_array::<32>(rng), random_array::<32>(rng), random_array::<32>(rng));
                let (kr, ka) = (r.keygen(&d, &z)?, a.keygen(&d, &z)?);
                if kr.public != ka.public || kr.secret != ka.secret {
                    return Err(diverge(scheme, i, "key pair"));
                }
                let ((cr, sr), (ca, sa)) = (r.encapsulate(kr.public.as_bytes(), &m)?, a.encapsulate(ka.public.as_bytes(), &m)?);
                if cr != ca || sr != sa {
                    return Err(diverge(scheme, i, "encapsulation"));
                }
                let mut bad = cr.into_bytes();
                let bit = rng.gen_range(0..bad.len() * 8);
                bad[bit / 8] ^= 1 << (bit % 8);
                let (dr, da) = (r.decapsulate(kr.secret.as_bytes(), &bad)?, a.decapsulate(ka.secret.as_bytes(), &bad)?);
                if dr != da {
                    return Err(diverge(scheme, i, "implicit rejection"));
                }
                if a.decapsulate(ka.secret.as_bytes(), ca.as_bytes())? != sr {
                    return Err(diverge(scheme, i, "decapsulation"));
                }
            }
        }
        PqcScheme::Dilithium(level) => {
            let (r, a) = (
                Dilithium::new(level, Backend::Reference)?,
                Dilithium::new(level, Backend::Accelerated)?,
            );
            for i in 0..seeds {
                let (xi, msg) = (random_array::<32>(rng), random_array::<MESSAGE_BYTES>(rng));
                let (kr, ka) = (r.keygen(&xi)?, a.keygen(&xi)?);
                if kr.public != ka.public || kr.secret != ka.secret {
                    return Err(diverge(scheme, i, "key pair"));
                }
                let sr = r.sign(kr.secret.as_bytes(), &msg, SigningMode::Deterministic)?;
                let sa = a.sign(ka.secret.as_bytes(), &msg, SigningMode::Deterministic)?;
                if sr != sa {
                    return Err(diverge(scheme, i, "signature"));
                }
                if !a.verify(ka.public.as_bytes(), &msg, sr.as_bytes()) || !r.verify(kr.public.as_bytes(), &msg, sa.as_bytes()) {
                    return Err(diverge(scheme, i, "verification"));
                }
            }
        }
    }
    Ok(Equivalence { scheme, seeds })
}

/// Times every operation of `scheme` on `backend`.
pub fn bench_pqc(scheme: PqcScheme, backend: Backend, cfg: &CampaignConfig) -> Result<BenchReport> {
    let mut rng = cfg.rng(scheme.level_number() as u64);
    let mut rows = Vec::new();
    for op in scheme.ops() {
        let mut work = pqc_workload(scheme, backend, op, cfg.warmup + cfg.iterations, &mut rng)?;
        rows.push((measure(op.as_str(), &cfg.timer, &mut work, cfg.iterations, cfg.warmup)?, 1));
    }
    Ok(BenchReport::pqc(scheme, backend.as_str(), cfg, rows))
}

/// Times every operation of `scheme` on each backend, alternating backends
/// every iteration. All backends see the same inputs. Returns one report per
/// backend, in order.
pub fn bench_pqc_interleaved(scheme: PqcScheme, backends: &[Backend], cfg: &CampaignConfig) -> Result<Vec<BenchReport>> {
    let mut rows: Vec<Vec<(TimingStats, u32)>> = vec![Vec::new(); backends.len()];
    let mut rng = cfg.rng(scheme.level_number() as u64);
    for op in scheme.ops() {
        let op_seed = rng.next_u64();
        let mut works = backends
            .iter()
            .map(|&b| pqc_workload(scheme, b, op, cfg.warmup + cfg.iterations, &mut StdRng::seed_from_u64(op_seed)))
            .collect::<Result<Vec<_>>>()?;
        let stats = measure_interleaved(op.as_str(), &cfg.timer, &mut works, cfg.iterations, cfg.warmup)?;
        for (r, st) in rows.iter_mut().zip(stats) {
            r.push((st, 1));
        }
    }
    Ok(backends
        .iter()
        .zip(rows)
        .map(|(b, r)| BenchReport::pqc(scheme, b.as_str(), cfg, r))
        .collect())
}

/// Times the operations making up a classical scheme's total. An unavailable
/// scheme or a failed correctness gate yields an unavailable report.
pub fn bench_classical(handle: &ProviderHandle, scheme: ClassicalScheme, cfg: &CampaignConfig) -> BenchReport {
    let run = || -> Result<Vec<(TimingStats, u32)>> {
        classical::correctness_gate(handle, scheme)?;
        let mut rows = Vec::new();
        for (op, multiplicity) in classical::total_composition(scheme, cfg.rsa_policy) {
            let mut work = classical::run_classical_op(handle, scheme, op)?;
            rows.push((measure(op.as_str(), &cfg.timer, &mut work, cfg.iterations, cfg.warmup)?, multiplicity));
        }
        Ok(rows)
    };
    if !handle.is_available(scheme) {
        return BenchReport::unavailable(scheme, cfg, "provider lacks this scheme".into());
    }
    match run() {
        Ok(rows) => BenchReport::classical(scheme, cfg, rows),
        Err(e) => BenchReport::unavailable(scheme, cfg, e.to_string()),
    }
}
