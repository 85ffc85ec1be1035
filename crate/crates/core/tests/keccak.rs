//! SHA-3 and SHAKE against the FIPS-202 fixture, plus stream properties.

use pqbench::keccak::{hash, permute, xof, HashVariant, Sponge, XofVariant};
use proptest::prelude::*;

fn variant(name: &str) -> Result<HashVariant, XofVariant> {
    match name {
        "sha3_256" => Ok(HashVariant::Sha3_256),
        "sha3_512" => Ok(HashVariant::Sha3_512),
        "shake128" => Err(XofVariant::Shake128),
        "shake256" => Err(XofVariant::Shake256),
        other => panic!("unknown function {other} in fixture"),
    }
}

#[test]
fn fips202_fixture() {
    let text = include_str!("vectors/fips202.txt");
    let mut checked = 0;
    for (line_no, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [name, msg, digest] = fields[..] else {
            panic!("malformed fixture line {}", line_no + 1)
        };
        let msg = if msg == "-" { Vec::new() } else { hex::decode(msg).unwrap() };
        let want = hex::decode(digest).unwrap();
        let got = match variant(name) {
            Ok(h) => hash(h, &msg),
            Err(x) => xof(x, &msg, want.len()),
        };
        assert_eq!(got, want, "{name} over {} bytes (fixture line {})", msg.len(), line_no + 1);
        checked += 1;
    }
    assert_eq!(checked, 4 * 401);
}

#[test]
fn empty_message_digests() {
    let head = |v: Vec<u8>| hex::encode(&v[..8]);
    assert_eq!(head(hash(HashVariant::Sha3_256, b"")), "a7ffc6f8bf1ed766");
    assert_eq!(head(hash(HashVariant::Sha3_512, b"")), "a69f73cca23a9ac5");
    assert_eq!(head(xof(XofVariant::Shake128, b"", 32)), "7f9c2ba4e88f827d");
    assert_eq!(
        hex::encode(hash(HashVariant::Sha3_256, b"")),
        "a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a"
    );
    assert!(xof(XofVariant::Shake256, b"abc", 0).is_empty());
}

#[test]
fn permutation_spot_checks() {
    let mut a = [0u64; 25];
    let mut b = a;
    b[7] = 1;
    permute(&mut a);
    permute(&mut b);
    assert_ne!(a, b, "distinct inputs collide");
    let start = a;
    permute(&mut a);
    assert_ne!(a, start);
    permute(&mut a);
    assert_ne!(a, start, "cycle of length 2");
}

proptest! {
    #[test]
    fn stream_prefix(data in prop::collection::vec(any::<u8>(), 0..400), n in 0usize..700, m in 0usize..700) {
        let (m, n) = (m.min(n), m.max(n));
        for v in [XofVariant::Shake128, XofVariant::Shake256] {
            let long = xof(v, &data, n);
            prop_assert_eq!(&long[..m], &xof(v, &data, m)[..]);
        }
    }

    #[test]
    fn incremental_matches_one_shot(
        data in prop::collection::vec(any::<u8>(), 0..600),
        cuts in prop::collection::vec(0usize..600, 0..6),
        reads in prop::collection::vec(0usize..300, 1..6),
    ) {
        let mut cuts: Vec<usize> = cuts.into_iter().map(|c| c.min(data.len())).collect();
        cuts.sort_unstable();
        let mut sponge = Sponge::xof(XofVariant::Shake256);
        let mut prev = 0;
        for c in cuts.into_iter().chain([data.len()]) {
            sponge.absorb(&data[prev..c]);
            prev = c;
        }
        let mut reader = sponge.finalize();
        let mut got = Vec::new();
        for r in &reads {
            got.extend(reader.squeeze_vec(*r));
        }
        prop_assert_eq!(got, xof(XofVariant::Shake256, &data, reads.iter().sum()));
    }

    #[test]
    fn hashing_is_deterministic(data in prop::collection::vec(any::<u8>(), 0..300)) {
        prop_assert_eq!(hash(HashVariant::Sha3_256, &data), hash(HashVariant::Sha3_256, &data));
        prop_assert_eq!(hash(HashVariant::Sha3_512, &data).len(), 64);
    }
}
