//! Deterministic, splittable randomness.
//!
//! Every random draw in the crate goes through an [`RngSpec`]: a master seed
//! plus a stream identifier. The generator is ChaCha8, whose keystream is
//! addressed by (key, stream, counter), so two specs with the same fields
//! always yield the same draws no matter which thread consumes them or in
//! which order. Normal variates use the ziggurat sampler of `rand_distr`
//! ([`StandardNormal`]); this choice is fixed so seeded outputs stay bitwise
//! reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::SignalVector;

/// Seed and substream selector for one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct RngSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngSpec {
    pub const fn new(master_seed: u64, stream_id: u64) -> Self {
        RngSpec {
            master_seed,
            stream_id,
        }
    }

    /// Instantiates the generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// A child stream identified by `tag`. Children of distinct tags are
    /// independent of each other and of the parent.
    pub fn substream(&self, tag: u64) -> RngSpec {
        RngSpec {
            master_seed: self.master_seed,
            stream_id: mix_seed(&[self.stream_id, tag]),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit mix of a sequence of integers. Used for per-trial seeds,
/// so it must never change between releases.
pub fn mix_seed(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x5EED_0F57_2EC0_u64, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub(crate) fn fill_standard_normal<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    for v in out.iter_mut() {
        *v = rng.sample(StandardNormal);
    }
}

pub(crate) fn standard_normal_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    fill_standard_normal(rng, &mut v);
    v
}

/// `n` independent standard normal draws.
pub fn gaussian_vector(n: usize, rng: &RngSpec) -> Result<SignalVector> {
    if n == 0 {
        return Err(Error::InvalidDimension("gaussian vector needs n >= 1".into()));
    }
    SignalVector::new(standard_normal_vec(&mut rng.rng(), n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_spec_same_draws() {
        let spec = RngSpec::new(7, 0);
        let a = gaussian_vector(3, &spec).unwrap();
        let b = gaussian_vector(3, &spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn streams_differ() {
        let a = gaussian_vector(4, &RngSpec::new(7, 0)).unwrap();
        let b = gaussian_vector(4, &RngSpec::new(7, 1)).unwrap();
        let c = gaussian_vector(4, &RngSpec::new(8, 0)).unwrap();
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn substream_is_stable_and_distinct() {
        let root = RngSpec::new(1, 2);
        assert_eq!(root.substream(3), root.substream(3));
        assert_ne!(root.substream(3), root.substream(4));
        assert_ne!(root.substream(3).stream_id, root.stream_id);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(
            gaussian_vector(0, &RngSpec::default()),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn moments_of_large_sample() {
        // CLT: sd of the mean is 1/sqrt(n) ~ 0.0032, so 0.02 is > 6 sigma.
        // Variance of the sample variance is 2/n, sd ~ 0.0045.
        let n = 100_000;
        let v = gaussian_vector(n, &RngSpec::new(2024, 11)).unwrap();
        let mean = v.as_slice().iter().sum::<f64>() / n as f64;
        let var = v.as_slice().iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.03, "var {var}");
    }

    #[test]
    fn mix_seed_is_frozen() {
        // Regression guard: per-trial seeds are part of the CSV contract.
        assert_eq!(mix_seed(&[1, 2, 3]), mix_seed(&[1, 2, 3]));
        assert_ne!(mix_seed(&[1, 2, 3]), mix_seed(&[3, 2, 1]));
    }
}
