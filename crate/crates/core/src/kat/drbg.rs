//! The AES-256 counter-mode generator used by the submission-package KAT
//! harness (no personalization string, no reseeding).

use aes::cipher::generic_array::GenericArray;
use aes::cipher::{BlockEncrypt, KeyInit};
use aes::Aes256;

pub const ENTROPY_BYTES: usize = 48;

pub struct KatDrbg {
    key: [u8; 32],
    v: [u8; 16],
}

impl KatDrbg {
    pub fn new(entropy: &[u8; ENTROPY_BYTES]) -> Self {
        let mut drbg = KatDrbg {
            key: [0; 32],
            v: [0; 16],
        };
        drbg.update(Some(entropy));
        drbg
    }

    fn increment_v(&mut self) {
        for byte in self.v.iter_mut().rev() {
            let (next, carry) = byte.overflowing_add(1);
            *byte = next;
            if !carry {
                break;
            }
        }
    }

    fn next_block(&mut self, cipher: &Aes256) -> [u8; 16] {
        self.increment_v();
        let mut block = GenericArray::from(self.v);
        cipher.encrypt_block(&mut block);
        block.into()
    }

    fn update(&mut self, provided: Option<&[u8; ENTROPY_BYTES]>) {
        let cipher = Aes256::new(GenericArray::from_slice(&self.key));
        let mut temp = [0u8; ENTROPY_BYTES];
        for chunk in temp.chunks_exact_mut(16) {
            chunk.copy_from_slice(&self.next_block(&cipher));
        }
        if let Some(data) = provided {
            for (t, d) in temp.iter_mut().zip(data) {
                *t ^= d;
            }
        }
        self.key.copy_from_slice(&temp[..32]);
        self.v.copy_from_slice(&temp[32..]);
    }

    /// One generate call; output depends on how requests are split.
    pub fn fill(&mut self, out: &mut [u8]) {
        let cipher = Aes256::new(GenericArray::from_slice(&self.key));
        for chunk in out.chunks_mut(16) {
            let block = self.next_block(&cipher);
            chunk.copy_from_slice(&block[..chunk.len()]);
        }
        self.update(None);
    }

    pub fn bytes<const L: usize>(&mut self) -> [u8; L] {
        let mut out = [0u8; L];
        self.fill(&mut out);
        out
    }
}
