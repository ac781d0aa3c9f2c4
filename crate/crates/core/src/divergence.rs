//! φ-divergences and the Cressie-Read power-divergence family.
//!
//! Divergences that blow up (a positive cell measured against a zero cell, or
//! vice versa for negative indices) are returned as `f64::INFINITY` rather
//! than as errors, so callers can report them as "+∞ / reject".

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DivergenceError {
    #[error("probability vectors have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("power-divergence index must be finite, got {0}")]
    NonFiniteLambda(f64),
}

/// Distance from 0 or -1 under which `λ` is treated as the limiting case.
pub const LIMIT_BAND: f64 = 1e-9;

/// Power-divergence index λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Lambda(f64);

impl Lambda {
    pub const KULLBACK: Lambda = Lambda(0.0);
    pub const REVERSE_KULLBACK: Lambda = Lambda(-1.0);
    pub const PEARSON: Lambda = Lambda(1.0);
    pub const CRESSIE_READ: Lambda = Lambda(2.0 / 3.0);

    pub fn new(value: f64) -> Result<Self, DivergenceError> {
        if value.is_finite() {
            Ok(Self(value))
        } else {
            Err(DivergenceError::NonFiniteLambda(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn form(self) -> LambdaForm {
        if self.0.abs() <= LIMIT_BAND {
            LambdaForm::Kullback
        } else if (self.0 + 1.0).abs() <= LIMIT_BAND {
            LambdaForm::ReverseKullback
        } else {
            LambdaForm::Power(self.0)
        }
    }

    /// The Table-style default index set: −1, −1/2, 0, 2/3, 1, 3/2, 2.
    pub fn standard_set() -> Vec<Lambda> {
        [-1.0, -0.5, 0.0, 2.0 / 3.0, 1.0, 1.5, 2.0].into_iter().map(Lambda).collect()
    }
}

impl TryFrom<f64> for Lambda {
    type Error = DivergenceError;
    fn try_from(v: f64) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<Lambda> for f64 {
    fn from(l: Lambda) -> f64 {
        l.0
    }
}

impl std::fmt::Display for Lambda {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How a given λ is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaForm {
    Kullback,
    ReverseKullback,
    Power(f64),
}

fn check_lengths(p: &[f64], q: &[f64]) -> Result<(), DivergenceError> {
    if p.len() != q.len() {
        return Err(DivergenceError::LengthMismatch(p.len(), q.len()));
    }
    Ok(())
}

/// Kullback-Leibler divergence `Σ p_h log(p_h / q_h)` with `0 log(0/q) = 0`.
pub fn kullback(p: &[f64], q: &[f64]) -> Result<f64, DivergenceError> {
    check_lengths(p, q)?;
    let mut sum = 0.0;
    for (&ph, &qh) in p.iter().zip(q) {
        if ph == 0.0 {
            continue;
        }
        if qh == 0.0 {
            return Ok(f64::INFINITY);
        }
        sum += ph * (ph / qh).ln();
    }
    Ok(sum.max(0.0))
}

/// Power divergence
/// `d_λ(p, q) = (Σ p_h^{λ+1} q_h^{-λ} - 1) / (λ(λ+1))`,
/// with the Kullback limits at `λ = 0` and `λ = -1`.
pub fn power_divergence(p: &[f64], q: &[f64], lambda: Lambda) -> Result<f64, DivergenceError> {
    check_lengths(p, q)?;
    let l = match lambda.form() {
        LambdaForm::Kullback => return kullback(p, q),
        LambdaForm::ReverseKullback => return kullback(q, p),
        LambdaForm::Power(l) => l,
    };
    let mut sum = 0.0;
    for (&ph, &qh) in p.iter().zip(q) {
        match (ph == 0.0, qh == 0.0) {
            (true, true) => {}
            // p^{λ+1} vanishes for λ > -1 and explodes below.
            (true, false) => {
                if l < -1.0 {
                    return Ok(f64::INFINITY);
                }
            }
            // q^{-λ} explodes for λ > 0 and vanishes below.
            (false, true) => {
                if l > 0.0 {
                    return Ok(f64::INFINITY);
                }
            }
            (false, false) => sum += ph * (ph / qh).powf(l),
        }
    }
    // Exact zero when p == q; avoids rounding noise of the generic formula.
    if p == q {
        return Ok(0.0);
    }
    Ok(((sum - 1.0) / (l * (l + 1.0))).max(0.0))
}

/// Convex generator of a φ-divergence.
pub trait Phi {
    fn value(&self, x: f64) -> f64;
    /// `φ(0)`, possibly infinite.
    fn at_zero(&self) -> f64;
    /// `lim_{u→∞} φ(u)/u`, possibly infinite; weights cells with `q_h = 0`.
    fn slope_at_infinity(&self) -> f64;
    fn second_derivative_at_one(&self) -> f64;
}

/// `φ(x) = x log x - x + 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct KullbackPhi;

impl Phi for KullbackPhi {
    fn value(&self, x: f64) -> f64 {
        if x == 0.0 {
            1.0
        } else {
            x * x.ln() - x + 1.0
        }
    }
    fn at_zero(&self) -> f64 {
        1.0
    }
    fn slope_at_infinity(&self) -> f64 {
        f64::INFINITY
    }
    fn second_derivative_at_one(&self) -> f64 {
        1.0
    }
}

/// `φ_λ(x) = (x^{λ+1} - x - λ(x - 1)) / (λ(λ+1))`, with its limits at
/// `λ = 0` (`x log x - x + 1`) and `λ = -1` (`-log x + x - 1`).
#[derive(Debug, Clone, Copy)]
pub struct PowerPhi(pub Lambda);

impl Phi for PowerPhi {
    fn value(&self, x: f64) -> f64 {
        match self.0.form() {
            LambdaForm::Kullback => KullbackPhi.value(x),
            LambdaForm::ReverseKullback => {
                if x == 0.0 {
                    f64::INFINITY
                } else {
                    x - 1.0 - x.ln()
                }
            }
            LambdaForm::Power(l) => {
                if x == 0.0 {
                    self.at_zero()
                } else {
                    (x.powf(l + 1.0) - x - l * (x - 1.0)) / (l * (l + 1.0))
                }
            }
        }
    }
    fn at_zero(&self) -> f64 {
        match self.0.form() {
            LambdaForm::Kullback => 1.0,
            LambdaForm::ReverseKullback => f64::INFINITY,
            LambdaForm::Power(l) if l < -1.0 => f64::INFINITY,
            LambdaForm::Power(l) => 1.0 / (l + 1.0),
        }
    }
    fn slope_at_infinity(&self) -> f64 {
        match self.0.form() {
            LambdaForm::Kullback => f64::INFINITY,
            LambdaForm::ReverseKullback => 1.0,
            LambdaForm::Power(l) if l > 0.0 => f64::INFINITY,
            LambdaForm::Power(l) => -1.0 / l,
        }
    }
    fn second_derivative_at_one(&self) -> f64 {
        1.0
    }
}

/// `d_φ(p, q) = Σ q_h φ(p_h / q_h)` with `0 φ(0/0) = 0` and
/// `0 φ(p/0) = p lim φ(u)/u`.
pub fn phi_divergence<F: Phi + ?Sized>(p: &[f64], q: &[f64], phi: &F) -> Result<f64, DivergenceError> {
    check_lengths(p, q)?;
    let mut sum = 0.0;
    for (&ph, &qh) in p.iter().zip(q) {
        let term = match (ph == 0.0, qh == 0.0) {
            (true, true) => 0.0,
            (false, true) => ph * phi.slope_at_infinity(),
            (true, false) => qh * phi.at_zero(),
            (false, false) => qh * phi.value(ph / qh),
        };
        sum += term;
    }
    Ok(sum)
}
