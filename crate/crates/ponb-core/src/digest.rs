//! Order-sensitive 64-bit content digests (FNV-1a) for tagging inputs in
//! reports and manifests. Not cryptographic; collisions only matter for
//! accidental mixups, not adversaries.

use alloc::string::String;

const OFFSET_BASIS: u64 = 0xcbf2_9ce4_8422_2325;
const PRIME: u64 = 0x0000_0100_0000_01b3;

/// Running FNV-1a hash over a byte stream.
#[derive(Debug, Clone)]
pub struct Digest64 {
    state: u64,
}

impl Digest64 {
    pub fn new() -> Self {
        Self {
            state: OFFSET_BASIS,
        }
    }

    pub fn update_bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.state ^= u64::from(b);
            self.state = self.state.wrapping_mul(PRIME);
        }
    }

    pub fn update_u64(&mut self, value: u64) {
        self.update_bytes(&value.to_le_bytes());
    }

    pub fn update_usize(&mut self, value: usize) {
        self.update_u64(value as u64);
    }

    /// Hashes the exact bit pattern, so 0.0 and -0.0 differ and every NaN
    /// payload is distinct. Inputs come from deterministic pipelines, so
    /// bit-identity is the equality that matters.
    pub fn update_f64(&mut self, value: f64) {
        self.update_bytes(&value.to_bits().to_le_bytes());
    }

    pub fn finish(&self) -> u64 {
        self.state
    }
}

impl Default for Digest64 {
    fn default() -> Self {
        Self::new()
    }
}

/// Fixed-width lowercase hex rendering used in file headers and manifests.
pub fn to_hex(digest: u64) -> String {
    let mut out = String::with_capacity(16);
    for shift in (0..16).rev() {
        let nibble = ((digest >> (shift * 4)) & 0xf) as u32;
        let ch = char::from_digit(nibble, 16).unwrap();
        out.push(ch);
    }
    out
}
