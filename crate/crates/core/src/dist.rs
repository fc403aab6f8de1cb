//! Shifted-exponential processing-time laws.
//!
//! A station's processing time is `T + Exp(S)`: a minimal time `T` plus an
//! exponentially distributed excess with mean `S`. `S = 0` degenerates to a
//! deterministic duration. Stations that can be staffed sample from the
//! worker-modulated variant `T * exp(-c*n) + Exp(S*T)` for `n` assigned
//! workers, where `exp(-c*n)` is the performance coefficient.

use crate::math;
use crate::rng::RandomStream;

/// `minimum + Exp(exp_mean)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Distribution {
    /// Minimal possible value, `T >= 0`.
    pub minimum: f64,
    /// Mean of the exponential excess, `S >= 0`.
    pub exp_mean: f64,
}

impl Distribution {
    pub fn new(minimum: f64, exp_mean: f64) -> Self {
        assert!(minimum >= 0.0 && exp_mean >= 0.0, "distribution parameters must be non-negative");
        Distribution { minimum, exp_mean }
    }

    /// A deterministic duration.
    pub const fn constant(value: f64) -> Self {
        Distribution { minimum: value, exp_mean: 0.0 }
    }

    pub fn mean(&self) -> f64 {
        self.minimum + self.exp_mean
    }

    pub fn variance(&self) -> f64 {
        self.exp_mean * self.exp_mean
    }

    /// Draws one duration. Always `>= minimum`.
    pub fn sample(&self, stream: &mut RandomStream) -> f64 {
        self.minimum + stream.exponential(self.exp_mean)
    }

    /// The law of a station worked by `n` workers:
    /// `T * exp(-c*n) + Exp(S*T)`.
    pub fn worker_scaled(t: f64, s: f64, n: u32, c: f64) -> Self {
        Distribution::new(t * performance_coefficient(c, n), s * t)
    }
}

/// Multiplicative speed-up `exp(-c*n)` from assigning `n` workers.
pub fn performance_coefficient(c: f64, n: u32) -> f64 {
    math::exp(-c * f64::from(n))
}

/// Draws from `T + Exp(S)`.
pub fn sample_time(dist: &Distribution, stream: &mut RandomStream) -> f64 {
    dist.sample(stream)
}

/// Draws from the worker-modulated law `T * exp(-c*n) + Exp(S*T)`.
pub fn sample_worker_time(t: f64, s: f64, n: u32, c: f64, stream: &mut RandomStream) -> f64 {
    Distribution::worker_scaled(t, s, n, c).sample(stream)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_is_deterministic() {
        let d = Distribution::new(20.0, 0.0);
        let mut s = RandomStream::new(1, "d");
        for _ in 0..100 {
            assert_eq!(d.sample(&mut s), 20.0);
        }
    }

    #[test]
    fn samples_never_below_minimum() {
        let d = Distribution::new(5.0, 0.5);
        let mut s = RandomStream::new(2, "d");
        for _ in 0..10_000 {
            assert!(d.sample(&mut s) >= 5.0);
        }
    }

    /// Empirical mean and variance against the law of large numbers:
    /// within three standard errors of (T + S, S^2).
    #[test]
    fn moments_match() {
        let d = Distribution::new(20.0, 2.0);
        let mut s = RandomStream::new(3, "moments");
        let n = 100_000usize;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..n {
            let x = d.sample(&mut s);
            sum += x;
            sq += x * x;
        }
        let mean = sum / n as f64;
        let var = sq / n as f64 - mean * mean;
        let se_mean = 2.0 / (n as f64).sqrt();
        // Var of the sample variance of Exp(S) is 8 S^4 / n.
        let se_var = (8.0f64).sqrt() * 4.0 / (n as f64).sqrt();
        assert!((mean - 22.0).abs() < 3.0 * se_mean, "mean {mean}");
        assert!((mean - 22.0).abs() < 0.1, "mean {mean} outside [21.9, 22.1]");
        assert!((var - 4.0).abs() < 3.0 * se_var, "variance {var}");
    }

    #[test]
    fn worker_law_values() {
        let mut s = RandomStream::new(4, "w");
        // No workers, no noise: the plain minimum.
        assert_eq!(sample_worker_time(20.0, 0.0, 0, 0.3, &mut s), 20.0);
        // Two workers at c = 0.3: 20 * e^-0.6.
        let v = sample_worker_time(20.0, 0.0, 2, 0.3, &mut s);
        assert!((v - 10.976232721880529).abs() < 1e-12, "{v}");
        // Noise mean scales with T.
        let d = Distribution::worker_scaled(20.0, 0.1, 0, 0.3);
        assert_eq!(d.exp_mean, 2.0);
    }

    #[test]
    fn coefficient_identity() {
        assert_eq!(performance_coefficient(0.3, 0), 1.0);
        assert!((performance_coefficient(0.3, 1) - 0.7408182206817179).abs() < 1e-15);
    }
}
