//! Random streams and binomial draws for the simulation harness.
//!
//! Every replication gets its own ChaCha8 stream keyed by
//! `(master_seed, stream_index, replication)`, so results do not depend on
//! how replications are scheduled across workers.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const STREAM_TAG: [u8; 8] = *b"monotrnd";

/// Child stream for one `(grid point, replication)` pair. The 32-byte seed
/// is the concatenation of the three keys and a fixed tag, so distinct keys
/// never share a stream.
pub fn child_stream(master_seed: u64, stream: u64, replication: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&stream.to_le_bytes());
    seed[16..24].copy_from_slice(&replication.to_le_bytes());
    seed[24..].copy_from_slice(&STREAM_TAG);
    ChaCha8Rng::from_seed(seed)
}

/// Uniform on `[0, 1)` with 53 random bits.
pub fn uniform<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Binomial(n, p) by inversion of the CDF. For `p > 1/2` the draw is
/// `n - Binomial(n, 1 - p)` from the same uniforms, so draws at `p` and
/// `1 - p` from one stream are exact mirror images.
pub fn binomial<R: RngCore>(n: u64, p: f64, rng: &mut R) -> u64 {
    if p <= 0.0 {
        0
    } else if p >= 1.0 {
        n
    } else if p > 0.5 {
        n - binomial_low(n, 1.0 - p, rng)
    } else {
        binomial_low(n, p, rng)
    }
}

/// Binomial draw with a caller-supplied success probability `p ≤ 1/2`,
/// optionally reflected to `n - draw`.
pub(crate) fn binomial_reflected<R: RngCore>(n: u64, low_p: f64, reflect: bool, rng: &mut R) -> u64 {
    let k = if low_p <= 0.0 { 0 } else { binomial_low(n, low_p, rng) };
    if reflect {
        n - k
    } else {
        k
    }
}

fn binomial_low<R: RngCore>(n: u64, p: f64, rng: &mut R) -> u64 {
    debug_assert!(p > 0.0 && p <= 0.5);
    let q = 1.0 - p;
    // (1-p)^n would underflow: split into independent halves.
    if n as f64 * q.ln() < -600.0 {
        let half = n / 2;
        return binomial_low(half, p, rng) + binomial_low(n - half, p, rng);
    }
    let u = uniform(rng);
    let ratio = p / q;
    let mut pmf = q.powf(n as f64);
    let mut cdf = pmf;
    let mut k = 0;
    while u >= cdf && k < n {
        pmf *= (n - k) as f64 / (k + 1) as f64 * ratio;
        k += 1;
        cdf += pmf;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| 0).scan(child_stream(7, 1, 2), |r, _| Some(r.next_u64())).collect();
        let b: Vec<u64> = (0..4).map(|_| 0).scan(child_stream(7, 1, 2), |r, _| Some(r.next_u64())).collect();
        assert_eq!(a, b);
        let c = child_stream(7, 2, 1).next_u64();
        let d = child_stream(7, 1, 3).next_u64();
        assert_ne!(a[0], c);
        assert_ne!(a[0], d);
    }

    #[test]
    fn binomial_mean_and_variance() {
        let (n, p) = (45u64, 0.3);
        let draws = 100_000;
        let mut rng = child_stream(11, 0, 0);
        let xs: Vec<f64> = (0..draws).map(|_| binomial(n, p, &mut rng) as f64).collect();
        let mean = xs.iter().sum::<f64>() / draws as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
        let (mu, sigma2) = (n as f64 * p, n as f64 * p * (1.0 - p));
        let se_mean = (sigma2 / draws as f64).sqrt();
        // Var of the sample variance: (μ4 - σ⁴)/N with μ4 = σ²(1 + 3(n-2)p(1-p)) for the binomial.
        let mu4 = sigma2 * (1.0 + 3.0 * (n as f64 - 2.0) * p * (1.0 - p));
        let se_var = ((mu4 - sigma2 * sigma2) / draws as f64).sqrt();
        assert!((mean - mu).abs() < 4.0 * se_mean, "mean {mean} vs {mu}");
        assert!((var - sigma2).abs() < 4.0 * se_var, "var {var} vs {sigma2}");
    }

    #[test]
    fn mirror_draws() {
        for r in 0..200 {
            let a = binomial(25, 0.2, &mut child_stream(3, 0, r));
            let b = binomial(25, 0.8, &mut child_stream(3, 0, r));
            assert_eq!(a + b, 25);
        }
    }

    #[test]
    fn degenerate_probabilities_and_large_n() {
        let mut rng = child_stream(1, 1, 1);
        assert_eq!(binomial(10, 0.0, &mut rng), 0);
        assert_eq!(binomial(10, 1.0, &mut rng), 10);
        let big = binomial(5_000, 0.5, &mut rng);
        assert!((2_300..=2_700).contains(&big));
    }
}
