//! Normal and chi-square survival functions.
//!
//! The chi-square survival function is the regularized upper incomplete
//! gamma function `Q(k/2, t/2)`, evaluated by its power series below the
//! transition point `x < a + 1` and by a Lentz continued fraction above it.
//! The normal tail is computed independently of the gamma code: Taylor
//! series of `Φ(z) - 1/2` near the centre and the Laplace continued fraction
//! for the Mills ratio in the tail.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum DomainError {
    #[error("argument {0} is not finite")]
    NonFinite(f64),
    #[error("chi-square statistic must be non-negative, got {0}")]
    NegativeStatistic(f64),
    #[error("degrees of freedom must be at least 1")]
    ZeroDegreesOfFreedom,
}

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;
const TINY: f64 = 1e-300;

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Upper tail `1 - Φ(z)` of the standard normal distribution.
pub fn normal_sf(z: f64) -> Result<f64, DomainError> {
    if !z.is_finite() {
        return Err(DomainError::NonFinite(z));
    }
    Ok(if z < 0.0 { 1.0 - upper_tail(-z) } else { upper_tail(z) })
}

fn upper_tail(z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z < 3.0 {
        0.5 - central_mass(z)
    } else if z > 38.5 {
        0.0
    } else {
        normal_pdf(z) * mills_ratio(z)
    }
}

/// `Φ(z) - 1/2 = φ(z) Σ z^(2k+1) / (1·3·5···(2k+1))`.
fn central_mass(z: f64) -> f64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let mut k = 1.0;
    while term.abs() > EPS * sum.abs() {
        term *= z2 / (2.0 * k + 1.0);
        sum += term;
        k += 1.0;
    }
    normal_pdf(z) * sum
}

/// Mills ratio `(1 - Φ(z)) / φ(z) = 1/(z + 1/(z + 2/(z + 3/(z + ...))))`.
fn mills_ratio(z: f64) -> f64 {
    // Modified Lentz on b0 = z, a_j = j, b_j = z.
    let mut f = z;
    let mut c = f;
    let mut d = 0.0;
    for j in 1..MAX_ITER {
        let a = j as f64;
        d = z + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = z + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    1.0 / f
}

/// Chi-square survival function `P(χ²_k ≥ t)`.
pub fn chi2_sf(t: f64, k: u32) -> Result<f64, DomainError> {
    if !t.is_finite() {
        return Err(DomainError::NonFinite(t));
    }
    if t < 0.0 {
        return Err(DomainError::NegativeStatistic(t));
    }
    if k == 0 {
        return Err(DomainError::ZeroDegreesOfFreedom);
    }
    Ok(gamma_q(0.5 * k as f64, 0.5 * t, ln_gamma_half_integer(k)))
}

/// `ln Γ(k/2)` by exact recursion from `Γ(1) = 1` or `Γ(1/2) = √π`.
pub fn ln_gamma_half_integer(k: u32) -> f64 {
    let a = 0.5 * k as f64;
    let (mut v, mut acc) = if k.is_multiple_of(2) { (1.0, 0.0) } else { (0.5, 0.5 * PI.ln()) };
    while v < a {
        acc += v.ln();
        v += 1.0;
    }
    acc
}

/// Regularized upper incomplete gamma `Q(a, x)` for `a > 0`, `x ≥ 0`.
fn gamma_q(a: f64, x: f64, ln_gamma_a: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let log_prefactor = a * x.ln() - x - ln_gamma_a;
    if x < a + 1.0 {
        let p = lower_series(a, x) * log_prefactor.exp();
        (1.0 - p).clamp(0.0, 1.0)
    } else {
        (upper_fraction(a, x) * log_prefactor.exp()).clamp(0.0, 1.0)
    }
}

/// `Σ x^n / (a (a+1) ... (a+n))`, so that `P(a,x) = e^{-x} x^a / Γ(a) · series`.
fn lower_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum
}

/// Continued fraction with `Q(a,x) = e^{-x} x^a / Γ(a) · cf`.
fn upper_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
