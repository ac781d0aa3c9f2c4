//! Maximum-likelihood fits of the linear logit model `logit π(x) = α + βx`
//! to aggregated binomial counts.
//!
//! Three fits are used by the trend tests: the homogeneous model `(α̃, 0)`,
//! the unrestricted model `(α̂, β̂)` and the fit restricted to `β ≤ 0`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::table::{DoseResponseTable, JointKind, JointProbVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("pooled success proportion is {0}; the homogeneous model has no finite intercept")]
    DegeneratePooled(f64),
    #[error("data are separated by dose ({0}); the likelihood has no finite maximizer")]
    Separation(SeparationKind),
    #[error("slope exceeded the separation bound {bound} on the standardized dose scale")]
    SlopeBound { bound: f64, last: Box<LogitFit> },
    #[error("Newton-Raphson did not converge in {} iterations (gradient norm {:.3e})", .last.iterations, .last.gradient_norm)]
    NonConvergence { last: Box<LogitFit> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeparationKind {
    /// Successes only at high doses, failures only at low doses.
    Increasing,
    /// Successes only at low doses, failures only at high doses.
    Decreasing,
}

impl std::fmt::Display for SeparationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Increasing => f.write_str("successes increase with dose"),
            Self::Decreasing => f.write_str("successes decrease with dose"),
        }
    }
}

/// Fitted linear logit model on the original dose scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogitFit {
    pub alpha: f64,
    pub beta: f64,
    pub fitted_success_probs: Vec<f64>,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Max-norm of the score divided by `n`, on the standardized dose scale.
    pub gradient_norm: f64,
}

/// Homogeneous model: every group shares the pooled proportion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousFit {
    pub alpha: f64,
    pub pooled_prob: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub max_halvings: usize,
    /// Largest admissible |slope| on the standardized dose scale.
    pub separation_bound: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            tolerance: 1e-10,
            max_halvings: 30,
            separation_bound: 50.0,
        }
    }
}

pub fn expit(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// `log(1 + e^eta)` without overflow.
fn softplus(eta: f64) -> f64 {
    if eta > 0.0 {
        eta + (-eta).exp().ln_1p()
    } else {
        eta.exp().ln_1p()
    }
}

/// Product-binomial log-likelihood (without the binomial coefficients).
pub fn log_likelihood(table: &DoseResponseTable, alpha: f64, beta: f64) -> f64 {
    table
        .rows()
        .map(|r| {
            let eta = alpha + beta * r.dose;
            r.successes as f64 * eta - r.n as f64 * softplus(eta)
        })
        .sum()
}

/// Analytic score `Σ (N_i1 - n_i π_i)(1, x_i)`.
pub fn score(table: &DoseResponseTable, alpha: f64, beta: f64) -> [f64; 2] {
    table.rows().fold([0.0, 0.0], |[sa, sb], r| {
        let resid = r.successes as f64 - r.n as f64 * expit(alpha + beta * r.dose);
        [sa + resid, sb + resid * r.dose]
    })
}

pub fn fit_homogeneous(table: &DoseResponseTable) -> Result<HomogeneousFit, FitError> {
    let total = table.total();
    let s = table.total_successes();
    let pooled_prob = s as f64 / total as f64;
    if s == 0 || s == total {
        return Err(FitError::DegeneratePooled(pooled_prob));
    }
    Ok(HomogeneousFit {
        alpha: logit(pooled_prob),
        pooled_prob,
    })
}

impl HomogeneousFit {
    /// The homogeneous model written as a logit fit with zero slope.
    pub fn to_logit_fit(&self, table: &DoseResponseTable) -> LogitFit {
        LogitFit {
            alpha: self.alpha,
            beta: 0.0,
            fitted_success_probs: vec![self.pooled_prob; table.groups()],
            log_likelihood: log_likelihood(table, self.alpha, 0.0),
            converged: true,
            iterations: 0,
            gradient_norm: 0.0,
        }
    }
}

/// Detects (quasi-)complete separation of successes and failures by dose.
///
/// With a single ordered covariate the MLE is infinite exactly when some
/// cut point has only failures below it and only successes above it, with
/// at most one mixed group sitting on the cut.
pub fn detect_separation(table: &DoseResponseTable) -> Option<SeparationKind> {
    let succ = table.successes();
    let sizes = table.group_sizes();
    let separated = |succ_idx: &dyn Fn(usize) -> u64, fail_idx: &dyn Fn(usize) -> u64| {
        // Last group with a success must not precede the first with a failure
        // by more than the shared boundary group.
        let first_success = (0..succ.len()).find(|&i| succ_idx(i) > 0);
        let last_failure = (0..succ.len()).rev().find(|&i| fail_idx(i) > 0);
        match (first_success, last_failure) {
            (Some(fs), Some(lf)) => fs >= lf,
            _ => false,
        }
    };
    if separated(&|i| succ[i], &|i| sizes[i] - succ[i]) {
        return Some(SeparationKind::Increasing);
    }
    if separated(&|i| sizes[i] - succ[i], &|i| succ[i]) {
        return Some(SeparationKind::Decreasing);
    }
    None
}

/// Unrestricted MLE `(α̂, β̂)` by damped Newton-Raphson with default options.
pub fn fit_logit(table: &DoseResponseTable) -> Result<LogitFit, FitError> {
    fit_logit_with(table, &FitOptions::default())
}

pub fn fit_logit_with(table: &DoseResponseTable, opts: &FitOptions) -> Result<LogitFit, FitError> {
    let total = table.total() as f64;
    let pooled = table.pooled_proportion();
    if pooled == 0.0 || pooled == 1.0 {
        return Err(FitError::DegeneratePooled(pooled));
    }
    if let Some(kind) = detect_separation(table) {
        return Err(FitError::Separation(kind));
    }

    // Work on z = (x - centre) / scale with trial weights.
    let centre = table.mean_dose();
    let var = table
        .rows()
        .map(|r| r.n as f64 * (r.dose - centre).powi(2))
        .sum::<f64>()
        / total;
    let scale = var.sqrt();
    let z: Vec<f64> = table.doses().iter().map(|x| (x - centre) / scale).collect();
    let n: Vec<f64> = table.group_sizes().iter().map(|&v| v as f64).collect();
    let y: Vec<f64> = table.successes().iter().map(|&v| v as f64).collect();

    let loglik = |a: f64, b: f64| -> f64 {
        z.iter()
            .zip(&n)
            .zip(&y)
            .map(|((zi, ni), yi)| {
                let eta = a + b * zi;
                yi * eta - ni * softplus(eta)
            })
            .sum()
    };
    // Score and the observed information (negated Hessian).
    let derivs = |a: f64, b: f64| -> ([f64; 2], [f64; 3]) {
        let mut g = [0.0; 2];
        let mut h = [0.0; 3];
        for ((zi, ni), yi) in z.iter().zip(&n).zip(&y) {
            let p = expit(a + b * zi);
            let r = yi - ni * p;
            let w = ni * p * (1.0 - p);
            g[0] += r;
            g[1] += r * zi;
            h[0] += w;
            h[1] += w * zi;
            h[2] += w * zi * zi;
        }
        (g, h)
    };

    let p0 = pooled.clamp(1e-8, 1.0 - 1e-8);
    let (mut a, mut b) = (logit(p0), 0.0);
    let mut ll = loglik(a, b);
    let mut iterations = 0;
    let mut converged = false;
    let mut grad_norm;
    loop {
        let (grad, info) = derivs(a, b);
        grad_norm = grad[0].abs().max(grad[1].abs()) / total;
        if grad_norm <= opts.tolerance {
            converged = true;
            break;
        }
        if iterations == opts.max_iterations {
            break;
        }
        iterations += 1;
        let det = info[0] * info[2] - info[1] * info[1];
        if !(det > 0.0 && det.is_finite()) {
            break;
        }
        let da = (info[2] * grad[0] - info[1] * grad[1]) / det;
        let db = (info[0] * grad[1] - info[1] * grad[0]) / det;

        // Halve until the likelihood does not decrease (up to rounding).
        let slack = 8.0 * f64::EPSILON * ll.abs();
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let (na, nb) = (a + step * da, b + step * db);
            let nll = loglik(na, nb);
            if nll >= ll - slack {
                (a, b, ll) = (na, nb, nll);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        if b.abs() > opts.separation_bound {
            let last = back_transform(table, a, b, centre, scale, false, iterations, grad_norm);
            return Err(FitError::SlopeBound {
                bound: opts.separation_bound,
                last: Box::new(last),
            });
        }
        if (step * da).abs().max((step * db).abs()) <= opts.tolerance {
            let (grad, _) = derivs(a, b);
            grad_norm = grad[0].abs().max(grad[1].abs()) / total;
            converged = true;
            break;
        }
    }

    let fit = back_transform(table, a, b, centre, scale, converged, iterations, grad_norm);
    if converged {
        Ok(fit)
    } else {
        Err(FitError::NonConvergence { last: Box::new(fit) })
    }
}

#[allow(clippy::too_many_arguments)]
fn back_transform(
    table: &DoseResponseTable,
    a: f64,
    b: f64,
    centre: f64,
    scale: f64,
    converged: bool,
    iterations: usize,
    gradient_norm: f64,
) -> LogitFit {
    let beta = b / scale;
    let alpha = a - beta * centre;
    let fitted_success_probs = table
        .doses()
        .iter()
        .map(|x| expit(a + b * (x - centre) / scale))
        .collect();
    LogitFit {
        alpha,
        beta,
        fitted_success_probs,
        log_likelihood: log_likelihood(table, alpha, beta),
        converged,
        iterations,
        gradient_norm,
    }
}

/// MLE under the restriction `β ≤ 0`: the unrestricted fit when its slope is
/// already non-positive, otherwise the homogeneous boundary fit.
pub fn fit_restricted_nonpositive(table: &DoseResponseTable) -> Result<LogitFit, FitError> {
    let unrestricted = fit_logit(table)?;
    restrict_nonpositive(table, unrestricted)
}

pub(crate) fn restrict_nonpositive(table: &DoseResponseTable, unrestricted: LogitFit) -> Result<LogitFit, FitError> {
    if unrestricted.beta <= 0.0 {
        Ok(unrestricted)
    } else {
        Ok(fit_homogeneous(table)?.to_logit_fit(table))
    }
}

/// Model joint probabilities `((n_i/n) π_i1, (n_i/n)(1 - π_i1))`.
pub fn joint_model_probs(table: &DoseResponseTable, alpha: f64, beta: f64) -> JointProbVector {
    let total = table.total() as f64;
    let entries = table
        .rows()
        .flat_map(|r| {
            let w = r.n as f64 / total;
            let p = expit(alpha + beta * r.dose);
            [w * p, w * (1.0 - p)]
        })
        .collect();
    let kind = if beta == 0.0 {
        JointKind::Homogeneous
    } else {
        JointKind::Model
    };
    JointProbVector::from_raw(entries, kind)
}

/// Joint probabilities from already computed per-group success probabilities.
pub(crate) fn joint_from_success_probs(table: &DoseResponseTable, probs: &[f64], kind: JointKind) -> JointProbVector {
    let total = table.total() as f64;
    let entries = table
        .group_sizes()
        .iter()
        .zip(probs)
        .flat_map(|(&ni, &p)| {
            let w = ni as f64 / total;
            [w * p, w * (1.0 - p)]
        })
        .collect();
    JointProbVector::from_raw(entries, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: &[(f64, u64, u64)]) -> DoseResponseTable {
        DoseResponseTable::new(
            rows.iter().map(|r| r.0).collect(),
            rows.iter().map(|r| r.1).collect(),
            rows.iter().map(|r| r.2).collect(),
        )
        .unwrap()
    }

    fn asbestosis() -> DoseResponseTable {
        table(&[(10.0, 1321, 71), (24.5, 1324, 88), (32.5, 1408, 100), (43.0, 1492, 116)])
    }

    #[test]
    fn homogeneous_fits() {
        let pp = table(&[(10.0, 1321, 179), (24.5, 1324, 170), (32.5, 1408, 226), (43.0, 1492, 307)]);
        assert!((fit_homogeneous(&pp).unwrap().pooled_prob - 0.1591).abs() < 5e-5);
        let h = fit_homogeneous(&asbestosis()).unwrap();
        assert!((h.pooled_prob - 0.0676).abs() < 5e-5);
        assert_eq!(h.pooled_prob, 375.0 / 5545.0);
        assert!((h.alpha - logit(375.0 / 5545.0)).abs() < 1e-15);
        let zero = table(&[(1.0, 5, 0), (2.0, 5, 0)]);
        assert!(matches!(fit_homogeneous(&zero), Err(FitError::DegeneratePooled(_))));
    }

    #[test]
    fn asbestosis_fitted_probabilities() {
        let fit = fit_logit(&asbestosis()).unwrap();
        let want = [0.0550, 0.0645, 0.0704, 0.0789];
        for (got, want) in fit.fitted_success_probs.iter().zip(want) {
            assert!((got - want).abs() < 5e-5, "{got} vs {want}");
        }
        assert!(fit.converged);
        assert!(fit.beta > 0.0);
    }

    #[test]
    fn homogeneous_data_give_zero_slope() {
        let fit = fit_logit(&table(&[(1.0, 10, 3), (2.0, 10, 3)])).unwrap();
        assert!(fit.beta.abs() < 1e-10);
        assert!((fit.alpha - logit(0.3)).abs() < 1e-10);
    }

    #[test]
    fn two_group_closed_form() {
        let t = table(&[(0.0, 10, 2), (1.0, 10, 5)]);
        let fit = fit_logit(&t).unwrap();
        assert!((fit.alpha + 1.386294361119891).abs() < 1e-8);
        assert!((fit.beta - 1.386294361119891).abs() < 1e-8);

        // Brute-force check that nothing on a grid around it does better.
        let best = fit.log_likelihood;
        for i in -50..=50 {
            for j in -50..=50 {
                let (a, b) = (fit.alpha + i as f64 * 0.02, fit.beta + j as f64 * 0.02);
                assert!(log_likelihood(&t, a, b) <= best + 1e-12);
            }
        }
    }

    #[test]
    fn restricted_fit() {
        let r = fit_restricted_nonpositive(&asbestosis()).unwrap();
        assert_eq!(r.beta, 0.0);
        for p in &r.fitted_success_probs {
            assert!((p - 0.0676).abs() < 5e-5);
        }

        let homog = table(&[(1.0, 10, 3), (2.0, 10, 3)]);
        let u = fit_logit(&homog).unwrap();
        assert_eq!(fit_restricted_nonpositive(&homog).unwrap(), u);

        let dec = table(&[(0.0, 10, 5), (1.0, 10, 2)]);
        let r = fit_restricted_nonpositive(&dec).unwrap();
        assert!((r.beta - (logit(0.2) - logit(0.5))).abs() < 1e-8);
        assert_eq!(r, fit_logit(&dec).unwrap());
    }

    #[test]
    fn joint_model_vectors() {
        let t = asbestosis();
        let fit = fit_logit(&t).unwrap();
        let q = joint_model_probs(&t, fit.alpha, fit.beta);
        assert!((q.entries()[0] - 1321.0 / 5545.0 * 0.0550).abs() < 1321.0 / 5545.0 * 5e-5);
        for (rs, &n) in q.row_sums().iter().zip(t.group_sizes()) {
            assert!((rs - n as f64 / 5545.0).abs() < 1e-15);
        }
        assert_eq!(q.kind(), JointKind::Model);

        let eq = table(&[(1.0, 7, 1), (2.0, 7, 3), (3.0, 7, 5)]);
        let u = joint_model_probs(&eq, 0.0, 0.0);
        assert_eq!(u.kind(), JointKind::Homogeneous);
        for e in u.entries() {
            assert!((e - 1.0 / 6.0).abs() < 1e-15);
        }
    }

    #[test]
    fn separation_detected() {
        let inc = table(&[(1.0, 10, 0), (2.0, 10, 4), (3.0, 10, 10)]);
        assert_eq!(detect_separation(&inc), Some(SeparationKind::Increasing));
        assert!(matches!(fit_logit(&inc), Err(FitError::Separation(SeparationKind::Increasing))));
        let dec = table(&[(1.0, 10, 10), (2.0, 10, 0)]);
        assert_eq!(detect_separation(&dec), Some(SeparationKind::Decreasing));
        let quasi = table(&[(1.0, 10, 0), (2.0, 10, 0), (3.0, 10, 0), (4.0, 10, 3)]);
        assert_eq!(detect_separation(&quasi), Some(SeparationKind::Increasing));
        let overlap = table(&[(1.0, 10, 0), (2.0, 10, 4), (3.0, 10, 9)]);
        assert_eq!(detect_separation(&overlap), None);
        assert!(fit_logit(&overlap).is_ok());
        // Boundary cells alone do not separate.
        let edge = table(&[(1.0, 10, 0), (2.0, 10, 10), (3.0, 10, 1)]);
        assert_eq!(detect_separation(&edge), None);
    }

    #[test]
    fn slope_bound_is_enforced() {
        let t = table(&[(0.0, 10, 1), (1.0, 10, 9)]);
        let opts = FitOptions {
            separation_bound: 0.5,
            ..FitOptions::default()
        };
        assert!(matches!(fit_logit_with(&t, &opts), Err(FitError::SlopeBound { .. })));
    }

    #[test]
    fn iteration_cap_reports_last_iterate() {
        let opts = FitOptions {
            max_iterations: 1,
            ..FitOptions::default()
        };
        match fit_logit_with(&asbestosis(), &opts) {
            Err(FitError::NonConvergence { last }) => assert_eq!(last.iterations, 1),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
