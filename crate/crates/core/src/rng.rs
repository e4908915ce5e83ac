//! Portable pseudo-random source for phantom synthesis.
//!
//! The generator is xorshift64* (Vigna 2016): state update
//! `x ^= x >> 12; x ^= x << 25; x ^= x >> 27`, output
//! `x * 0x2545F4914F6CDD1D` (wrapping). The 64-bit seed is first passed through
//! one SplitMix64 step so that small seeds (including 0) give a non-zero,
//! well-mixed state.
//!
//! Uniform deviates in `(0, 1]` use the top 53 output bits:
//! `((r >> 11) + 1) / 2^53`. Gaussian deviates use the polar-free Box–Muller
//! transform on two consecutive uniforms `u1, u2`:
//! `z0 = sqrt(-2 ln u1) * cos(2π u2)`, `z1 = sqrt(-2 ln u1) * sin(2π u2)`;
//! `z0` is returned first and `z1` is cached for the following call.

const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const XORSHIFT_STAR_MUL: u64 = 0x2545_F491_4F6C_DD1D;

fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(SPLITMIX_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct XorShift64Star {
    state: u64,
    cached_normal: Option<f64>,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let mut state = splitmix64(seed);
        if state == 0 {
            state = SPLITMIX_GAMMA;
        }
        XorShift64Star {
            state,
            cached_normal: None,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(XORSHIFT_STAR_MUL)
    }

    /// Uniform deviate in `(0, 1]`.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal deviate.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.cached_normal.take() {
            return z;
        }
        let u1 = self.next_open01();
        let u2 = self.next_open01();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.cached_normal = Some(radius * angle.sin());
        radius * angle.cos()
    }
}
