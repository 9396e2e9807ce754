//! Tiny RNG stubs shared by unit tests.

/// RNG whose `random::<f64>()` draws are pinned near 0.0 (forcing Bernoulli
/// wins) or just under 1.0 (forcing losses).
pub(crate) struct ForcedRng(pub bool);

impl ForcedRng {
    pub fn win() -> Self {
        ForcedRng(true)
    }

    pub fn loss() -> Self {
        ForcedRng(false)
    }
}

impl rand::RngCore for ForcedRng {
    fn next_u32(&mut self) -> u32 {
        self.next_u64() as u32
    }

    fn next_u64(&mut self) -> u64 {
        // f64 generation keeps the high 53 bits: all-zeros maps to exactly
        // 0.0, all-ones to just under 1.0.
        if self.0 {
            0
        } else {
            u64::MAX
        }
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        let v = if self.0 { 0u8 } else { 0xFF };
        dest.fill(v);
    }
}
