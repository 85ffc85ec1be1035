//! Acceptance run: every criterion at full scale, one PASS/FAIL line each.
//! Exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use pqbench::bench::{
    bench_pqc_interleaved, cycles_to_ms, equivalence_gate, speedup_rate, speedups, BenchReport, CampaignConfig, TimeUnit,
    TimingStats,
};
use pqbench::dilithium::{self, Dilithium, DilithiumLevel, SigningMode};
use pqbench::kyber::{self, Kyber, KyberLevel};
use pqbench::{kat, Backend, Domain, PqcScheme};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn b32(rng: &mut ChaCha20Rng) -> [u8; 32] {
    let mut b = [0u8; 32];
    rng.fill_bytes(&mut b);
    b
}

fn backends() -> Vec<Backend> {
    Backend::ALL.into_iter().filter(|b| b.is_available()).collect()
}

fn sizes() -> Outcome {
    let kyber = [(1632, 800, 768), (2400, 1184, 1088), (3168, 1568, 1568)];
    for (level, (sk, pk, ct)) in KyberLevel::ALL.into_iter().zip(kyber) {
        for backend in backends() {
            let kem = Kyber::new(level, backend).map_err(err)?;
            let kp = kem.keygen(&[1; 32], &[2; 32]).map_err(err)?;
            let (c, ss) = kem.encapsulate(kp.public.as_bytes(), &[3; 32]).map_err(err)?;
            let got = (kp.secret.len(), kp.public.len(), c.len());
            check(got == (sk, pk, ct) && ss.as_bytes().len() == 32, || format!("{level:?}: {got:?}"))?;
        }
    }
    let dil = [(1312, 2420), (1952, 3293), (2592, 4595)];
    for (level, (pk, sig)) in DilithiumLevel::ALL.into_iter().zip(dil) {
        for backend in backends() {
            let dsa = Dilithium::new(level, backend).map_err(err)?;
            let kp = dsa.keygen(&[4; 32]).map_err(err)?;
            let s = dsa.sign(kp.secret.as_bytes(), b"m", SigningMode::Deterministic).map_err(err)?;
            check((kp.public.len(), s.len()) == (pk, sig), || format!("{level:?}: {} {}", kp.public.len(), s.len()))?;
        }
    }
    Ok("6 parameter sets, all emitted lengths exact".into())
}

fn kat_conformance() -> Outcome {
    let mut runs = 0;
    for scheme in PqcScheme::ALL {
        let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("tests/kat/{}.rsp", scheme.name()));
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        for backend in backends() {
            let s = kat::run(&text, scheme, backend).map_err(err)?;
            check(s.total == 100 && s.all_passed(), || format!("{scheme} {backend:?}: {s}"))?;
            runs += 1;
        }
    }
    Ok(format!("100/100 records on {runs} scheme/backend runs"))
}

fn roundtrips(rng: &mut ChaCha20Rng) -> Outcome {
    const CASES: usize = 10_000;
    for level in KyberLevel::ALL {
        let kem = Kyber::new(level, Backend::Reference).map_err(err)?;
        for i in 0..CASES {
            let kp = kem.keygen(&b32(rng), &b32(rng)).map_err(err)?;
            let (ct, ss) = kem.encapsulate(kp.public.as_bytes(), &b32(rng)).map_err(err)?;
            let back = kem.decapsulate(kp.secret.as_bytes(), ct.as_bytes()).map_err(err)?;
            check(back == ss, || format!("{level:?} case {i}: secrets disagree"))?;
        }
    }
    for level in DilithiumLevel::ALL {
        let dsa = Dilithium::new(level, Backend::Reference).map_err(err)?;
        for i in 0..CASES {
            let kp = dsa.keygen(&b32(rng)).map_err(err)?;
            let mut msg = vec![0u8; rng.gen_range(0..128)];
            rng.fill_bytes(&mut msg);
            let sig = dsa.sign(kp.secret.as_bytes(), &msg, SigningMode::Deterministic).map_err(err)?;
            check(dsa.verify(kp.public.as_bytes(), &msg, sig.as_bytes()), || format!("{level:?} case {i}: rejected"))?;
        }
    }
    Ok(format!("{CASES} per level, 60000 total, all agree"))
}

fn tamper(rng: &mut ChaCha20Rng) -> Outcome {
    const CASES: usize = 10_000;
    let dsas: Vec<_> = DilithiumLevel::ALL
        .into_iter()
        .map(|l| {
            let d = Dilithium::new(l, Backend::Reference).unwrap();
            let kp = d.keygen(&b32(rng)).unwrap();
            (d, kp)
        })
        .collect();
    let kems: Vec<_> = KyberLevel::ALL
        .into_iter()
        .map(|l| {
            let k = Kyber::new(l, Backend::Reference).unwrap();
            let kp = k.keygen(&b32(rng), &b32(rng)).unwrap();
            (k, kp)
        })
        .collect();
    let flip = |bytes: &mut [u8], rng: &mut ChaCha20Rng| {
        let bit = rng.gen_range(0..bytes.len() * 8);
        bytes[bit / 8] ^= 1 << (bit % 8);
    };
    for i in 0..CASES {
        let (dsa, kp) = &dsas[i % 3];
        let mut msg = [0u8; 59];
        rng.fill_bytes(&mut msg);
        let sig = dsa.sign(kp.secret.as_bytes(), &msg, SigningMode::Deterministic).map_err(err)?;
        let (mut m, mut s) = (msg, sig.into_bytes());
        if i % 2 == 0 {
            flip(&mut s, rng);
        } else {
            flip(&mut m, rng);
        }
        check(!dsa.verify(kp.public.as_bytes(), &m, &s), || format!("{:?} case {i}: accepted", dsa.level()))?;
    }
    for i in 0..CASES {
        let (kem, kp) = &kems[i % 3];
        let (ct, ss) = kem.encapsulate(kp.public.as_bytes(), &b32(rng)).map_err(err)?;
        let mut bad = ct.into_bytes();
        flip(&mut bad, rng);
        let got = kem.decapsulate(kp.secret.as_bytes(), &bad).map_err(err)?;
        check(got != ss, || format!("Kyber case {i}: tampered ciphertext kept the secret"))?;
    }
    Ok(format!("{CASES} signature/message flips rejected, {CASES} ciphertext flips changed the secret"))
}

fn backend_equivalence(rng: &mut ChaCha20Rng) -> Outcome {
    const SEEDS: usize = 1_000;
    if !Backend::Accelerated.is_available() {
        return Ok("accelerated backend unavailable on this host; nothing to compare".into());
    }
    for level in KyberLevel::ALL {
        let (r, a) = (Kyber::new(level, Backend::Reference).map_err(err)?, Kyber::new(level, Backend::Accelerated).map_err(err)?);
        for i in 0..SEEDS {
            let (d, z, m) = (b32(rng), b32(rng), b32(rng));
            let (kr, ka) = (r.keygen(&d, &z).map_err(err)?, a.keygen(&d, &z).map_err(err)?);
            let er = r.encapsulate(kr.public.as_bytes(), &m).map_err(err)?;
            let ea = a.encapsulate(ka.public.as_bytes(), &m).map_err(err)?;
            let mut bad = er.0.as_bytes().to_vec();
            let at = i % bad.len();
            bad[at] ^= 1;
            let dr = r.decapsulate(kr.secret.as_bytes(), &bad).map_err(err)?;
            let da = a.decapsulate(ka.secret.as_bytes(), &bad).map_err(err)?;
            check(kr == ka && er == ea && dr == da, || format!("{level:?} seed {i} diverges"))?;
        }
    }
    for level in DilithiumLevel::ALL {
        let (r, a) = (
            Dilithium::new(level, Backend::Reference).map_err(err)?,
            Dilithium::new(level, Backend::Accelerated).map_err(err)?,
        );
        for i in 0..SEEDS {
            let (xi, rnd) = (b32(rng), b32(rng));
            let mut msg = [0u8; 59];
            rng.fill_bytes(&mut msg);
            let (kr, ka) = (r.keygen(&xi).map_err(err)?, a.keygen(&xi).map_err(err)?);
            let sr = r.sign(kr.secret.as_bytes(), &msg, SigningMode::Deterministic).map_err(err)?;
            let sa = a.sign(ka.secret.as_bytes(), &msg, SigningMode::Deterministic).map_err(err)?;
            let hr = r.sign(kr.secret.as_bytes(), &msg, SigningMode::Randomized(&rnd)).map_err(err)?;
            let ha = a.sign(ka.secret.as_bytes(), &msg, SigningMode::Randomized(&rnd)).map_err(err)?;
            let verdicts = (r.verify(kr.public.as_bytes(), &msg, sa.as_bytes()), a.verify(ka.public.as_bytes(), &msg, sr.as_bytes()));
            check(kr == ka && sr == sa && hr == ha && verdicts == (true, true), || format!("{level:?} seed {i} diverges"))?;
        }
    }
    Ok(format!("{SEEDS} seeds x 6 parameter sets bit-identical"))
}

fn negacyclic(a: &[i64], b: &[i64], q: i64) -> Vec<i64> {
    let n = a.len();
    let mut acc = vec![0i128; n];
    for i in 0..n {
        for j in 0..n {
            let t = a[i] as i128 * b[j] as i128;
            if i + j < n {
                acc[i + j] += t;
            } else {
                acc[i + j - n] -= t;
            }
        }
    }
    acc.into_iter().map(|x| x.rem_euclid(q as i128) as i64).collect()
}

fn ntt_oracle(rng: &mut ChaCha20Rng) -> Outcome {
    const PAIRS: usize = 1_000;
    for i in 0..PAIRS {
        let a: Vec<u16> = (0..kyber::N).map(|_| rng.gen_range(0..kyber::Q as u16)).collect();
        let b: Vec<u16> = (0..kyber::N).map(|_| rng.gen_range(0..kyber::Q as u16)).collect();
        let wide = |v: &[u16]| v.iter().map(|&x| x as i64).collect::<Vec<_>>();
        let want = negacyclic(&wide(&a), &wide(&b), kyber::Q as i64);
        for backend in backends() {
            let pa = kyber::RingElement::from_coeffs(&a, Domain::Normal).map_err(err)?.ntt_with(backend).map_err(err)?;
            let pb = kyber::RingElement::from_coeffs(&b, Domain::Normal).map_err(err)?.ntt_with(backend).map_err(err)?;
            let got = pa.mul_ntt_with(&pb, backend).and_then(|p| p.inv_ntt_with(backend)).map_err(err)?;
            check(wide(&got.coeffs()) == want, || format!("Kyber ring pair {i} on {backend:?}"))?;
        }
    }
    for i in 0..PAIRS {
        let a: Vec<u32> = (0..dilithium::N).map(|_| rng.gen_range(0..dilithium::Q as u32)).collect();
        let b: Vec<u32> = (0..dilithium::N).map(|_| rng.gen_range(0..dilithium::Q as u32)).collect();
        let wide = |v: &[u32]| v.iter().map(|&x| x as i64).collect::<Vec<_>>();
        let want = negacyclic(&wide(&a), &wide(&b), dilithium::Q as i64);
        for backend in backends() {
            let pa = dilithium::RingElement::from_coeffs(&a, Domain::Normal).map_err(err)?.ntt_with(backend).map_err(err)?;
            let pb = dilithium::RingElement::from_coeffs(&b, Domain::Normal).map_err(err)?.ntt_with(backend).map_err(err)?;
            let got = pa.mul_ntt_with(&pb, backend).and_then(|p| p.inv_ntt_with(backend)).map_err(err)?;
            check(wide(&got.coeffs()) == want, || format!("Dilithium ring pair {i} on {backend:?}"))?;
        }
    }
    Ok(format!("{PAIRS} pairs per ring on {} backend(s) match schoolbook", backends().len()))
}

/// Criterion 7 shares one interleaved campaign across its three parts.
struct Campaign {
    reports: Vec<(PqcScheme, Vec<BenchReport>)>,
}

fn campaign() -> Result<Campaign, String> {
    let cfg = CampaignConfig {
        iterations: 1_000,
        input_seed: Some(0x7ac),
        ..CampaignConfig::default()
    };
    let reports = PqcScheme::ALL
        .into_iter()
        .map(|s| Ok((s, bench_pqc_interleaved(s, &backends(), &cfg).map_err(err)?)))
        .collect::<Result<_, String>>()?;
    Ok(Campaign { reports })
}

fn totals_increase(c: &Campaign) -> Outcome {
    let totals: Vec<f64> = c.reports.iter().map(|(_, r)| r[0].total_ms()).collect();
    let (ky, di) = totals.split_at(3);
    let fmt = |t: &[f64]| t.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" < ");
    check(ky.windows(2).all(|w| w[0] < w[1]), || format!("Kyber totals ms {ky:?}"))?;
    check(di.windows(2).all(|w| w[0] < w[1]), || format!("Dilithium totals ms {di:?}"))?;
    Ok(format!("Kyber {} ms; Dilithium {} ms", fmt(ky), fmt(di)))
}

fn sign_share(c: &Campaign) -> Outcome {
    let mut shares = Vec::new();
    for (scheme, r) in c.reports.iter().filter(|(s, _)| matches!(s, PqcScheme::Dilithium(_))) {
        let reference = &r[0];
        let sign = reference.op("sign").ok_or("no sign row")?;
        let share = reference.median_ms(sign) / reference.total_ms();
        check(share > 0.5, || format!("{scheme}: sign is {:.1}% of the total", share * 100.0))?;
        shares.push(format!("{scheme} {:.1}%", share * 100.0));
    }
    Ok(format!("sign share of reference total: {}", shares.join(", ")))
}

fn speedups_exceed(c: &Campaign, rng: &mut ChaCha20Rng) -> Outcome {
    if !Backend::Accelerated.is_available() {
        return Ok("accelerated backend unavailable on this host; not applicable".into());
    }
    let (mut lo, mut hi, mut slowest) = (f64::MAX, 0.0f64, String::new());
    for (scheme, r) in &c.reports {
        let proof = equivalence_gate(*scheme, 1_000, rng).map_err(err)?;
        let sp = speedups(&r[0], &r[1], &proof).map_err(err)?;
        for (op, rate) in sp.per_op.iter().chain([&("total".to_string(), sp.total)]) {
            check(*rate > 1.5, || format!("{scheme} {op}: {rate:.2}x"))?;
            if *rate < lo {
                lo = *rate;
                slowest = format!("{scheme} {op}");
            }
            hi = hi.max(*rate);
        }
    }
    Ok(format!("every speedup in {lo:.2}x..{hi:.2}x, lowest {slowest}"))
}

fn harness_self_checks() -> Outcome {
    let s = TimingStats::from_samples("op", TimeUnit::Cycles, &[900, 100, 500, 300, 700, 200]).map_err(err)?;
    check((s.median_cycles, s.mean_cycles, s.min_cycles, s.max_cycles) == (400.0, 450.0, 100, 900), || format!("{s:?}"))?;
    let ms = cycles_to_ms(3_300_000.0, 3.3e9).map_err(err)?;
    check(ms == 1.0, || format!("3,300,000 cycles at 3.3 GHz gave {ms} ms"))?;
    let stat = |median: f64| TimingStats {
        op_name: "gen".into(),
        iterations: 1,
        unit: TimeUnit::Cycles,
        median_cycles: median,
        mean_cycles: median,
        min_cycles: 0,
        max_cycles: 0,
    };
    for (r, a, want) in [(0.052, 0.008, 6.50), (0.840, 0.144, 5.83)] {
        let got = speedup_rate(&stat(r), &stat(a)).map_err(err)?;
        check((got * 100.0).round() / 100.0 == want, || format!("{r}/{a} gave {got}"))?;
    }
    Ok("planted statistics, clock conversion and published ratios reproduced".into())
}

fn main() -> ExitCode {
    let mut rng = ChaCha20Rng::seed_from_u64(0xacce97);
    let mut failed = 0;
    let mut report = |id: &str, name: &str, outcome: Outcome, started: Instant| {
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id} {name}: PASS ({detail}) [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} {name}: FAIL ({why}) [{secs:.1}s]");
            }
        }
    };
    let t = Instant::now();
    report("1", "size exactness", sizes(), t);
    let t = Instant::now();
    report("2", "KAT conformance", kat_conformance(), t);
    let t = Instant::now();
    report("3", "roundtrip properties", roundtrips(&mut rng), t);
    let t = Instant::now();
    report("4", "tamper rejection", tamper(&mut rng), t);
    let t = Instant::now();
    report("5", "backend equivalence", backend_equivalence(&mut rng), t);
    let t = Instant::now();
    report("6", "NTT oracle equivalence", ntt_oracle(&mut rng), t);
    let t = Instant::now();
    match campaign() {
        Ok(c) => {
            report("7a", "totals increase with level", totals_increase(&c), t);
            report("7b", "Dilithium sign dominates", sign_share(&c), t);
            report("7c", "speedups exceed 1.5x", speedups_exceed(&c, &mut rng), t);
        }
        Err(why) => {
            for id in ["7a", "7b", "7c"] {
                report(id, "methodology reproduction", Err(why.clone()), t);
            }
        }
    }
    let t = Instant::now();
    report("8", "harness self-checks", harness_self_checks(), t);
    if failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
