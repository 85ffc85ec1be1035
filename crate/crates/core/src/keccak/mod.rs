//! Keccak-f[1600] and the FIPS-202 sponge functions (SHA3-256, SHA3-512,
//! SHAKE128, SHAKE256).
//!
//! [`Sponge`] absorbs; [`Sponge::finalize`] consumes it and returns an
//! [`XofReader`] that only squeezes, so absorbing after squeezing does not
//! type-check. One-shot helpers wrap both.

mod round;
#[cfg(target_arch = "x86_64")]
pub(crate) mod x4;

use crate::{Error, Result};

pub const SHAKE128_RATE: usize = 168;
pub const SHAKE256_RATE: usize = 136;
pub const SHA3_256_RATE: usize = 136;
pub const SHA3_384_RATE: usize = 104;
pub const SHA3_512_RATE: usize = 72;

const SHA3_DOMAIN: u8 = 0x06;
const SHAKE_DOMAIN: u8 = 0x1f;

pub(crate) const ROUND_CONSTANTS: [u64; 24] = [
    0x0000000000000001,
    0x0000000000008082,
    0x800000000000808a,
    0x8000000080008000,
    0x000000000000808b,
    0x0000000080000001,
    0x8000000080008081,
    0x8000000000008009,
    0x000000000000008a,
    0x0000000000000088,
    0x0000000080008009,
    0x000000008000000a,
    0x000000008000808b,
    0x800000000000008b,
    0x8000000000008089,
    0x8000000000008003,
    0x8000000000008002,
    0x8000000000000080,
    0x000000000000800a,
    0x800000008000000a,
    0x8000000080008081,
    0x8000000000008080,
    0x0000000080000001,
    0x8000000080008008,
];


/// Applies the 24-round Keccak-f[1600] permutation in place.
/// Lane `(x, y)` lives at index `x + 5y`.
pub fn permute(a: &mut [u64; 25]) {
    for rc in ROUND_CONSTANTS {
        round::round(a, rc);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Absorbing,
    Squeezing,
}

/// Fixed-length digests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HashVariant {
    Sha3_256,
    Sha3_512,
}

impl HashVariant {
    pub fn output_len(self) -> usize {
        match self {
            HashVariant::Sha3_256 => 32,
            HashVariant::Sha3_512 => 64,
        }
    }

    fn rate(self) -> usize {
        match self {
            HashVariant::Sha3_256 => SHA3_256_RATE,
            HashVariant::Sha3_512 => SHA3_512_RATE,
        }
    }
}

/// Extendable-output functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XofVariant {
    Shake128,
    Shake256,
}

impl XofVariant {
    pub fn rate(self) -> usize {
        match self {
            XofVariant::Shake128 => SHAKE128_RATE,
            XofVariant::Shake256 => SHAKE256_RATE,
        }
    }
}

/// Raw sponge state: 25 lanes, the rate in bytes, and the byte offset into the
/// current block. While absorbing `position < rate`; while squeezing
/// `position == rate` means the current block is exhausted and the next
/// squeeze permutes first.
#[derive(Clone)]
pub struct SpongeState {
    lanes: [u64; 25],
    rate: usize,
    position: usize,
    phase: Phase,
}

impl SpongeState {
    pub fn lanes(&self) -> &[u64; 25] {
        &self.lanes
    }

    pub fn rate(&self) -> usize {
        self.rate
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    fn xor_byte(&mut self, i: usize, byte: u8) {
        self.lanes[i / 8] ^= (byte as u64) << (8 * (i % 8));
    }

    fn byte(&self, i: usize) -> u8 {
        (self.lanes[i / 8] >> (8 * (i % 8))) as u8
    }
}

impl std::fmt::Debug for SpongeState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpongeState")
            .field("rate", &self.rate)
            .field("position", &self.position)
            .field("phase", &self.phase)
            .finish_non_exhaustive()
    }
}

/// A sponge in the absorbing phase.
#[derive(Clone, Debug)]
pub struct Sponge {
    state: SpongeState,
    domain: u8,
}

impl Sponge {
    /// A raw sponge with the given rate and domain-separation suffix byte.
    pub fn new(rate: usize, domain: u8) -> Result<Self> {
        if ![SHAKE128_RATE, SHAKE256_RATE, SHA3_384_RATE, SHA3_512_RATE].contains(&rate) {
            return Err(Error::InvalidParameter(format!("unsupported sponge rate {rate}")));
        }
        Ok(Self::with_rate(rate, domain))
    }

    fn with_rate(rate: usize, domain: u8) -> Self {
        Sponge {
            state: SpongeState {
                lanes: [0; 25],
                rate,
                position: 0,
                phase: Phase::Absorbing,
            },
            domain,
        }
    }

    pub fn shake128() -> Self {
        Self::with_rate(SHAKE128_RATE, SHAKE_DOMAIN)
    }

    pub fn shake256() -> Self {
        Self::with_rate(SHAKE256_RATE, SHAKE_DOMAIN)
    }

    pub fn xof(variant: XofVariant) -> Self {
        Self::with_rate(variant.rate(), SHAKE_DOMAIN)
    }

    pub fn sha3(variant: HashVariant) -> Self {
        Self::with_rate(variant.rate(), SHA3_DOMAIN)
    }

    pub fn state(&self) -> &SpongeState {
        &self.state
    }

    pub fn absorb(&mut self, mut data: &[u8]) -> &mut Self {
        let s = &mut self.state;
        while !data.is_empty() {
            if s.position == 0 && data.len() >= s.rate {
                for (lane, chunk) in s.lanes.iter_mut().zip(data[..s.rate].chunks_exact(8)) {
                    *lane ^= u64::from_le_bytes(chunk.try_into().unwrap());
                }
                permute(&mut s.lanes);
                data = &data[s.rate..];
                continue;
            }
            let take = (s.rate - s.position).min(data.len());
            for (i, &b) in data[..take].iter().enumerate() {
                s.xor_byte(s.position + i, b);
            }
            s.position += take;
            data = &data[take..];
            if s.position == s.rate {
                permute(&mut s.lanes);
                s.position = 0;
            }
        }
        self
    }

    /// Pads, switches to squeezing, and returns the output stream.
    pub fn finalize(self) -> XofReader {
        let mut s = self.state;
        s.xor_byte(s.position, self.domain);
        s.xor_byte(s.rate - 1, 0x80);
        s.phase = Phase::Squeezing;
        s.position = s.rate;
        XofReader { state: s }
    }
}

/// A sponge in the squeezing phase. Successive squeezes concatenate.
#[derive(Clone, Debug)]
pub struct XofReader {
    state: SpongeState,
}

impl XofReader {
    pub fn state(&self) -> &SpongeState {
        &self.state
    }

    pub fn squeeze(&mut self, mut out: &mut [u8]) {
        let s = &mut self.state;
        while !out.is_empty() {
            if s.position == s.rate {
                permute(&mut s.lanes);
                s.position = 0;
            }
            if s.position == 0 && out.len() >= s.rate {
                for (chunk, lane) in out[..s.rate].chunks_exact_mut(8).zip(&s.lanes) {
                    chunk.copy_from_slice(&lane.to_le_bytes());
                }
                s.position = s.rate;
                out = &mut out[s.rate..];
                continue;
            }
            let take = (s.rate - s.position).min(out.len());
            for (i, o) in out[..take].iter_mut().enumerate() {
                *o = s.byte(s.position + i);
            }
            s.position += take;
            out = &mut out[take..];
        }
    }

    pub fn squeeze_vec(&mut self, len: usize) -> Vec<u8> {
        let mut out = vec![0u8; len];
        self.squeeze(&mut out);
        out
    }

    /// Squeezes exactly `out.len() / rate` whole blocks; `out.len()` must be a
    /// multiple of the rate.
    pub fn squeeze_blocks(&mut self, out: &mut [u8]) {
        debug_assert_eq!(out.len() % self.state.rate, 0);
        self.squeeze(out);
    }
}

/// FIPS-202 digest of `data`.
pub fn hash(variant: HashVariant, data: &[u8]) -> Vec<u8> {
    let mut s = Sponge::sha3(variant);
    s.absorb(data);
    s.finalize().squeeze_vec(variant.output_len())
}

/// The first `out_len` bytes of the SHAKE stream for `data`.
pub fn xof(variant: XofVariant, data: &[u8], out_len: usize) -> Vec<u8> {
    let mut s = Sponge::xof(variant);
    s.absorb(data);
    s.finalize().squeeze_vec(out_len)
}

pub fn sha3_256(data: &[u8]) -> [u8; 32] {
    let mut out = [0u8; 32];
    let mut s = Sponge::sha3(HashVariant::Sha3_256);
    s.absorb(data);
    s.finalize().squeeze(&mut out);
    out
}

pub fn sha3_512(data: &[u8]) -> [u8; 64] {
    let mut out = [0u8; 64];
    let mut s = Sponge::sha3(HashVariant::Sha3_512);
    s.absorb(data);
    s.finalize().squeeze(&mut out);
    out
}

/// SHAKE256 over the concatenation of `parts`, written into `out`.
pub fn shake256_into(parts: &[&[u8]], out: &mut [u8]) {
    let mut s = Sponge::shake256();
    for p in parts {
        s.absorb(p);
    }
    s.finalize().squeeze(out);
}

/// SHAKE128 reader over the concatenation of `parts`.
pub fn shake128_reader(parts: &[&[u8]]) -> XofReader {
    let mut s = Sponge::shake128();
    for p in parts {
        s.absorb(p);
    }
    s.finalize()
}

/// SHAKE256 reader over the concatenation of `parts`.
pub fn shake256_reader(parts: &[&[u8]]) -> XofReader {
    let mut s = Sponge::shake256();
    for p in parts {
        s.absorb(p);
    }
    s.finalize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_state_first_lane() {
        let mut s = [0u64; 25];
        permute(&mut s);
        // published output bytes E7 DD E1 40 79 8F 25 F1, read little-endian
        assert_eq!(s[0], 0xF1258F7940E1DDE7);
        // second application, from the published intermediate values
        permute(&mut s);
        assert_eq!(s[0], 0x2D5C954DF96ECB3C);
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(
            hex::encode(hash(HashVariant::Sha3_256, b"")),
            "a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a"
        );
        assert_eq!(
            hex::encode(hash(HashVariant::Sha3_512, b"")),
            "a69f73cca23a9ac5c8b567dc185a756e97c982164fe25859e0d1dcc1475c80a6\
             15b2123af1f5f94c11e3e9402c3ac558f500199d95b6d3e301758586281dcd26"
        );
        assert_eq!(
            hex::encode(xof(XofVariant::Shake128, b"", 32)),
            "7f9c2ba4e88f827d616045507605853ed73b8093f6efbc88eb1a6eacfa66ef26"
        );
        assert_eq!(
            hex::encode(xof(XofVariant::Shake256, b"", 32)),
            "46b9dd2b0ba88d13233b3feb743eeb243fcd52ea62b81b82b50c27646ed5762f"
        );
        assert!(xof(XofVariant::Shake256, b"abc", 0).is_empty());
    }

    #[test]
    fn rejects_unknown_rate() {
        assert!(Sponge::new(100, SHAKE_DOMAIN).is_err());
        assert!(Sponge::new(SHA3_384_RATE, SHA3_DOMAIN).is_ok());
    }

    #[test]
    fn incremental_squeeze_concatenates() {
        let whole = xof(XofVariant::Shake128, b"seed", 64);
        let mut r = shake128_reader(&[b"se", b"ed"]);
        let mut a = [0u8; 32];
        let mut b = [0u8; 32];
        r.squeeze(&mut a);
        r.squeeze(&mut b);
        assert_eq!(&whole[..32], &a);
        assert_eq!(&whole[32..], &b);
    }

    #[test]
    fn position_stays_within_rate() {
        let mut s = Sponge::shake256();
        for n in 0..300 {
            s.absorb(&vec![n as u8; n % 150]);
            assert!(s.state().position() < s.state().rate());
        }
        let mut r = s.finalize();
        assert_eq!(r.state().phase(), Phase::Squeezing);
        for n in 0..50 {
            r.squeeze_vec(n * 7);
            assert!(r.state().position() <= r.state().rate());
        }
    }
}
