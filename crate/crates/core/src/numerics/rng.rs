use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Seeded random stream: ChaCha8 (rand_chacha) keyed by `seed`, with
/// independent sub-streams selected through the ChaCha stream id.
///
/// Uniform draws take the top 53 bits of one `u64`; Gaussian draws use the
/// Box-Muller transform on exactly two uniforms, so every sample advances
/// the stream by a fixed amount.
#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Rng {
            seed,
            stream,
            inner,
        }
    }

    /// Independent generator for work item `index` under the same seed.
    pub fn child(&self, index: u64) -> Rng {
        Rng::with_stream(self.seed, self.stream.wrapping_add(index.wrapping_add(1)))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal sample.
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// Sample from N(mean, stddev^2). `stddev == 0` returns `mean` exactly.
pub fn gaussian(rng: &mut Rng, mean: f64, stddev: f64) -> Result<f64> {
    if !(stddev >= 0.0) || !stddev.is_finite() {
        return Err(Error::Argument(format!(
            "standard deviation must be finite and >= 0, got {stddev}"
        )));
    }
    let z = rng.standard_normal();
    if stddev == 0.0 {
        return Ok(mean);
    }
    Ok(mean + stddev * z)
}
