/// The deterministic random stream behind every generator.
///
/// This is the splitmix64 step function: the state advances by the constant
/// `0x9E3779B97F4A7C15` and the output is the state scrambled by two
/// xor-shift-multiply rounds (`0xBF58476D1CE4E5B9`, `0x94D049BB133111EB`)
/// and a final 31-bit xor-shift. Derived draws are specified exactly so that
/// seeded outputs are bit-identical across platforms:
///
/// - `next_below(n)` is `next_u64() % n` (the modulo bias is irrelevant at
///   the sizes used here),
/// - `next_f64()` is the top 53 bits scaled to `[0, 1)`,
/// - `next_bool(p)` is `next_f64() < p`.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub fn next_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_bool(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// A fresh generator seeded from this stream, for per-trial substreams.
    pub fn fork(&mut self) -> SplitMix64 {
        SplitMix64::new(self.next_u64())
    }
}
