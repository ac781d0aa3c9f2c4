//! Trend tests for monotone success proportions.
//!
//! * Cochran-Armitage: `T_CA = Σ N_i1 (x_i - x̄) / sqrt(p̂(1-p̂) Σ n_i (x_i - x̄)²)`,
//!   standard normal one-sided, `T_CA²` against χ²₁ two-sided.
//! * Power-divergence trend statistics `T_λ = Q¹_λ - Q²_λ` with
//!   `Q¹_λ = 2n d_λ(p̂, p(α̃, 0))` and `Q²_λ = 2n d_λ(p̂, p(α̂, β̂))`.
//!   Two-sided `T_λ ~ χ²₁`, one-sided `T_λ ~ ½χ²₀ + ½χ²₁`, and `Q²_λ` doubles
//!   as a goodness-of-fit statistic for the linear logit model, `χ²_{I-2}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divergence::{power_divergence, DivergenceError, Lambda};
use crate::logit::{self, FitError, HomogeneousFit, LogitFit};
use crate::specfun::{chi2_sf, normal_sf, DomainError};
use crate::table::{empirical_joint, DoseResponseTable, JointKind};

/// Statistics within this distance below zero are rounding noise.
pub const NEGATIVE_CLAMP: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrendError {
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Divergence(#[from] DivergenceError),
    #[error("trend statistic {0} is negative beyond rounding")]
    NegativeStatistic(f64),
    #[error("goodness of fit is undefined with {0} dose groups (the logit model is saturated)")]
    Saturated(usize),
    #[error("no power-divergence indices requested")]
    NoLambdas,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    Increasing,
    Decreasing,
    TwoSided,
}

impl std::str::FromStr for Alternative {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "increasing" => Ok(Self::Increasing),
            "decreasing" => Ok(Self::Decreasing),
            "two_sided" | "two-sided" | "two" => Ok(Self::TwoSided),
            other => Err(format!("unknown alternative `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CochranArmitage {
    pub statistic: f64,
    pub statistic_squared: f64,
    /// `P(Z ≥ T_CA)`, for an increasing alternative.
    pub p_one_sided: f64,
    pub p_two_sided: f64,
}

pub fn cochran_armitage(table: &DoseResponseTable) -> Result<CochranArmitage, TrendError> {
    let pooled = logit::fit_homogeneous(table)?.pooled_prob;
    let xbar = table.mean_dose();
    let (num, ss) = table.rows().fold((0.0, 0.0), |(num, ss), r| {
        let d = r.dose - xbar;
        (num + r.successes as f64 * d, ss + r.n as f64 * d * d)
    });
    let statistic = num / (pooled * (1.0 - pooled) * ss).sqrt();
    let statistic_squared = statistic * statistic;
    Ok(CochranArmitage {
        statistic,
        statistic_squared,
        p_one_sided: normal_sf(statistic)?,
        p_two_sided: chi2_sf(statistic_squared, 1)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceTrend {
    pub lambda: Lambda,
    pub q1: f64,
    pub q2: f64,
    pub t: f64,
    /// Set when a divergence was infinite (zero cells under `λ ≤ -1`).
    pub infinite: bool,
}

/// Fits both models and evaluates `Q¹_λ`, `Q²_λ` and `T_λ`.
pub fn divergence_trend(table: &DoseResponseTable, lambda: Lambda) -> Result<DivergenceTrend, TrendError> {
    let homog = logit::fit_homogeneous(table)?;
    let fit = logit::fit_logit(table)?;
    divergence_trend_from_fits(table, &homog, &fit, lambda)
}

/// Same as [`divergence_trend`] with the fits supplied by the caller.
pub fn divergence_trend_from_fits(
    table: &DoseResponseTable,
    homog: &HomogeneousFit,
    fit: &LogitFit,
    lambda: Lambda,
) -> Result<DivergenceTrend, TrendError> {
    let n = table.total() as f64;
    let empirical = empirical_joint(table);
    let null = logit::joint_from_success_probs(table, &vec![homog.pooled_prob; table.groups()], JointKind::Homogeneous);
    let model = logit::joint_from_success_probs(table, &fit.fitted_success_probs, JointKind::Model);
    // φ''(1) = 1 for every member of the power family.
    let q1 = 2.0 * n * power_divergence(empirical.entries(), null.entries(), lambda)?;
    let q2 = 2.0 * n * power_divergence(empirical.entries(), model.entries(), lambda)?;
    let infinite = q1.is_infinite() || q2.is_infinite();
    let t = if infinite {
        f64::INFINITY
    } else if (q1 - q2).abs() < NEGATIVE_CLAMP {
        0.0
    } else {
        q1 - q2
    };
    Ok(DivergenceTrend {
        lambda,
        q1,
        q2,
        t,
        infinite,
    })
}

fn clamp_statistic(t: f64) -> Result<f64, TrendError> {
    if t.is_nan() {
        return Err(DomainError::NonFinite(t).into());
    }
    if t < -NEGATIVE_CLAMP {
        return Err(TrendError::NegativeStatistic(t));
    }
    Ok(t.max(0.0))
}

/// Chi-bar-square p-value `½ P(χ²₀ ≥ T) + ½ P(χ²₁ ≥ T)` for the alternative
/// `β > 0`. The statistic is taken as zero whenever `beta_hat ≤ 0`.
pub fn one_sided_p(t: f64, beta_hat: f64) -> Result<f64, TrendError> {
    let t = clamp_statistic(t)?;
    if beta_hat <= 0.0 || t == 0.0 {
        return Ok(1.0);
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    Ok(0.5 * chi2_sf(t, 1)?)
}

pub fn two_sided_p(t: f64) -> Result<f64, TrendError> {
    let t = clamp_statistic(t)?;
    if t.is_infinite() {
        return Ok(0.0);
    }
    Ok(chi2_sf(t, 1)?)
}

/// One- and two-sided p-values of a trend statistic. For `λ ≠ 0` the
/// statistic is not a difference of nested optima of the same criterion and
/// can be genuinely negative in small samples; such values carry no evidence
/// against homogeneity and get p-value 1. Negative noise within the clamp is
/// treated as 0.
pub fn trend_p_values(t: f64, beta_hat: f64) -> Result<(f64, f64), TrendError> {
    if t < -NEGATIVE_CLAMP {
        return Ok((1.0, 1.0));
    }
    Ok((one_sided_p(t, beta_hat)?, two_sided_p(t)?))
}

/// Goodness-of-fit p-value of `Q²` against `χ²_{I-2}`.
pub fn gof_p(q2: f64, groups: usize) -> Result<f64, TrendError> {
    if groups < 3 {
        return Err(TrendError::Saturated(groups));
    }
    let q2 = clamp_statistic(q2)?;
    if q2.is_infinite() {
        return Ok(0.0);
    }
    Ok(chi2_sf(q2, (groups - 2) as u32)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzeOptions {
    /// Level at which a goodness-of-fit rejection is flagged.
    pub gof_level: f64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self { gof_level: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaResult {
    pub statistic: f64,
    pub statistic_squared: f64,
    pub p_one_sided: f64,
    pub p_two_sided: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaResult {
    pub lambda: f64,
    pub q1: Option<f64>,
    pub q2: Option<f64>,
    pub t: Option<f64>,
    pub p_one_sided: Option<f64>,
    pub p_two_sided: Option<f64>,
    pub p_gof: Option<f64>,
    pub infinite: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub groups: usize,
    pub total: u64,
    pub alternative: Alternative,
    pub ca: Option<CaResult>,
    pub alpha_hat: Option<f64>,
    pub beta_hat: Option<f64>,
    pub direction: Direction,
    pub homogeneous: Option<HomogeneousFit>,
    pub unrestricted: Option<LogitFit>,
    pub restricted: Option<LogitFit>,
    pub lambda_results: Vec<LambdaResult>,
    pub gof_level: f64,
    /// True when any goodness-of-fit p-value falls at or below `gof_level`.
    /// Trend results are still reported when it is set.
    pub gof_flag: Option<bool>,
    pub errors: Vec<String>,
}

impl TrendReport {
    /// Every requested quantity was computed.
    pub fn is_complete(&self) -> bool {
        self.errors.is_empty()
    }

    /// First result for a given λ.
    pub fn lambda(&self, lambda: f64) -> Option<&LambdaResult> {
        self.lambda_results.iter().find(|r| (r.lambda - lambda).abs() < 1e-12)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// Aligned plain-text rendering, one column per λ.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let alt = match self.alternative {
            Alternative::Increasing => "increasing",
            Alternative::Decreasing => "decreasing",
            Alternative::TwoSided => "two-sided",
        };
        out.push_str(&format!("groups: {}  total: {}  alternative: {}\n", self.groups, self.total, alt));
        if let (Some(a), Some(b)) = (self.alpha_hat, self.beta_hat) {
            out.push_str(&format!("logit fit: alpha = {a:.6}  beta = {b:.6}  ({:?})\n", self.direction));
        }
        if let Some(h) = &self.homogeneous {
            out.push_str(&format!("pooled proportion: {:.4}\n", h.pooled_prob));
        }
        if !self.lambda_results.is_empty() {
            let label_w = 14;
            let col_w = 12;
            let fmt_opt = |v: Option<f64>| match v {
                Some(x) if x.is_infinite() => "inf".to_string(),
                Some(x) if x != 0.0 && x.abs() < 1e-4 => format!("{x:.2e}"),
                Some(x) => format!("{x:.4}"),
                None => "-".to_string(),
            };
            let mut line = |label: &str, f: &dyn Fn(&LambdaResult) -> String| {
                out.push_str(&format!("{label:<label_w$}"));
                for r in &self.lambda_results {
                    out.push_str(&format!("{:>col_w$}", f(r)));
                }
                out.push('\n');
            };
            line("lambda", &|r| format!("{:.4}", r.lambda));
            line("T", &|r| fmt_opt(r.t));
            line("p one-sided", &|r| fmt_opt(r.p_one_sided));
            line("p two-sided", &|r| fmt_opt(r.p_two_sided));
            line("Q2 (gof)", &|r| fmt_opt(r.q2));
            line("p gof", &|r| fmt_opt(r.p_gof));
        }
        if let Some(ca) = &self.ca {
            out.push_str(&format!(
                "Cochran-Armitage: T = {:.4}  p one-sided = {}  T^2 = {:.4}  p two-sided = {}\n",
                ca.statistic,
                fmt_p(ca.p_one_sided),
                ca.statistic_squared,
                fmt_p(ca.p_two_sided)
            ));
        }
        match self.gof_flag {
            Some(true) => out.push_str(&format!(
                "warning: linear logit model rejected by goodness of fit at level {}\n",
                self.gof_level
            )),
            Some(false) => {}
            None => out.push_str("goodness of fit: not available\n"),
        }
        for e in &self.errors {
            out.push_str(&format!("error: {e}\n"));
        }
        out
    }
}

fn fmt_p(p: f64) -> String {
    if p != 0.0 && p < 1e-4 {
        format!("{p:.2e}")
    } else {
        format!("{p:.4}")
    }
}

/// Runs the full analysis: both fits, the Cochran-Armitage test and every
/// requested power-divergence statistic with its one-sided, two-sided and
/// goodness-of-fit p-values.
///
/// Fit failures do not abort the analysis; whatever could be computed is
/// returned and the failures are listed in [`TrendReport::errors`].
pub fn analyze(
    table: &DoseResponseTable,
    lambdas: &[Lambda],
    alternative: Alternative,
    opts: &AnalyzeOptions,
) -> Result<TrendReport, TrendError> {
    if lambdas.is_empty() {
        return Err(TrendError::NoLambdas);
    }
    let mut errors = Vec::new();
    // Sign of the tested slope: negating it is equivalent to negating doses.
    let orient = if alternative == Alternative::Decreasing { -1.0 } else { 1.0 };

    let ca = match cochran_armitage(table) {
        Ok(ca) => Some(CaResult {
            statistic: ca.statistic,
            statistic_squared: ca.statistic_squared,
            p_one_sided: normal_sf(orient * ca.statistic)?,
            p_two_sided: ca.p_two_sided,
        }),
        Err(e) => {
            errors.push(format!("cochran-armitage: {e}"));
            None
        }
    };

    let homog = logit::fit_homogeneous(table).map_err(|e| errors.push(format!("homogeneous fit: {e}"))).ok();
    let unrestricted = match logit::fit_logit(table) {
        Ok(f) => Some(f),
        Err(e) => {
            if homog.is_some() {
                errors.push(format!("logit fit: {e}"));
            }
            None
        }
    };
    let restricted = match (&unrestricted, homog) {
        (Some(f), Some(h)) => {
            // Restricted to the null side of the tested direction.
            Some(if orient * f.beta <= 0.0 { f.clone() } else { h.to_logit_fit(table) })
        }
        _ => None,
    };

    let direction = match &unrestricted {
        Some(f) => {
            let spread = table.doses()[table.groups() - 1] - table.doses()[0];
            if (f.beta * spread).abs() <= 1e-9 {
                Direction::None
            } else if f.beta > 0.0 {
                Direction::Increasing
            } else {
                Direction::Decreasing
            }
        }
        None => Direction::None,
    };

    let mut lambda_results = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let mut res = LambdaResult {
            lambda: lambda.value(),
            q1: None,
            q2: None,
            t: None,
            p_one_sided: None,
            p_two_sided: None,
            p_gof: None,
            infinite: false,
            error: None,
        };
        if let (Some(h), Some(f)) = (&homog, &unrestricted) {
            let evaluated = divergence_trend_from_fits(table, h, f, lambda).and_then(|d| {
                res.q1 = Some(d.q1);
                res.q2 = Some(d.q2);
                res.t = Some(d.t);
                res.infinite = d.infinite;
                let (p1, p2) = trend_p_values(d.t, orient * f.beta)?;
                res.p_one_sided = Some(p1);
                res.p_two_sided = Some(p2);
                Ok(d)
            });
            match evaluated {
                Ok(d) => match gof_p(d.q2, table.groups()) {
                    Ok(p) => res.p_gof = Some(p),
                    Err(TrendError::Saturated(_)) => {}
                    Err(e) => res.error = Some(e.to_string()),
                },
                Err(e) => res.error = Some(e.to_string()),
            }
            if let Some(e) = &res.error {
                errors.push(format!("lambda {}: {e}", lambda.value()));
            }
        }
        lambda_results.push(res);
    }

    let gof_values: Vec<f64> = lambda_results.iter().filter_map(|r| r.p_gof).collect();
    let gof_flag = if gof_values.is_empty() {
        None
    } else {
        Some(gof_values.iter().any(|&p| p <= opts.gof_level))
    };

    Ok(TrendReport {
        groups: table.groups(),
        total: table.total(),
        alternative,
        ca,
        alpha_hat: unrestricted.as_ref().map(|f| f.alpha),
        beta_hat: unrestricted.as_ref().map(|f| f.beta),
        direction,
        homogeneous: homog,
        unrestricted,
        restricted,
        lambda_results,
        gof_level: opts.gof_level,
        gof_flag,
        errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    fn table(rows: &[(f64, u64, u64)]) -> DoseResponseTable {
        DoseResponseTable::new(
            rows.iter().map(|r| r.0).collect(),
            rows.iter().map(|r| r.1).collect(),
            rows.iter().map(|r| r.2).collect(),
        )
        .unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ca_asbestosis() {
        let ca = cochran_armitage(&datasets::ed_asbestosis()).unwrap();
        assert!(close(ca.statistic, 2.5842, 5e-5));
        assert!(close(ca.p_one_sided, 0.0049, 5e-5));
        assert!(close(ca.statistic_squared, 6.6779, 5e-5));
        assert!(close(ca.p_two_sided, 0.0098, 5e-5));
    }

    #[test]
    fn ca_homogeneous_is_zero() {
        let ca = cochran_armitage(&table(&[(1.0, 10, 2), (2.0, 20, 4), (5.0, 30, 6)])).unwrap();
        assert!(ca.statistic.abs() < 1e-12);
        assert!(close(ca.p_one_sided, 0.5, 1e-12));
        assert!(cochran_armitage(&table(&[(1.0, 10, 0), (2.0, 10, 0)])).is_err());
    }

    #[test]
    fn divergence_trend_asbestosis() {
        let t = datasets::ed_asbestosis();
        let d0 = divergence_trend(&t, Lambda::KULLBACK).unwrap();
        assert!(close(d0.t, 6.7664, 5e-5));
        assert!(close(d0.q2, 0.1575, 5e-5));
        let d23 = divergence_trend(&t, Lambda::CRESSIE_READ).unwrap();
        assert!(close(d23.t, 6.6430, 5e-5));
        assert!(!d23.infinite);
    }

    #[test]
    fn homogeneous_two_groups_give_zero() {
        let d = divergence_trend(&table(&[(0.0, 10, 3), (1.0, 10, 3)]), Lambda::KULLBACK).unwrap();
        assert!(d.q1.abs() < 1e-10 && d.q2.abs() < 1e-10 && d.t.abs() < 1e-10);
    }

    #[test]
    fn pearson_count_form() {
        let t = datasets::ed_pleural_plaques();
        let d = divergence_trend(&t, Lambda::PEARSON).unwrap();
        let p = t.pooled_proportion();
        let pearson: f64 = t
            .rows()
            .map(|r| {
                let (e1, e2) = (r.n as f64 * p, r.n as f64 * (1.0 - p));
                let (o1, o2) = (r.successes as f64, (r.n - r.successes) as f64);
                (o1 - e1).powi(2) / e1 + (o2 - e2).powi(2) / e2
            })
            .sum();
        assert!(close(d.q1, pearson, 1e-8));
    }

    #[test]
    fn p_value_rules() {
        assert!(close(one_sided_p(6.7664, 1.0).unwrap(), 0.0046, 5e-5));
        assert_eq!(one_sided_p(0.0, 1.0).unwrap(), 1.0);
        assert_eq!(one_sided_p(5.0, -0.1).unwrap(), 1.0);
        assert_eq!(one_sided_p(-1e-12, 1.0).unwrap(), 1.0);
        assert!(close(one_sided_p(3.841459, 0.2).unwrap(), 0.025, 1e-4));
        assert!(matches!(one_sided_p(-1e-6, 1.0), Err(TrendError::NegativeStatistic(_))));

        assert!(two_sided_p(45.9821).unwrap() < 1e-10);
        assert_eq!(two_sided_p(0.0).unwrap(), 1.0);
        // Printed p-values are truncated, not rounded, to 4 decimals.
        assert!(close(two_sided_p(6.6430).unwrap(), 0.0099, 1e-4));
        assert_eq!(two_sided_p(f64::INFINITY).unwrap(), 0.0);

        assert!(close(gof_p(0.1575, 4).unwrap(), 0.9242, 1e-4));
        assert!(close(gof_p(9.2358, 4).unwrap(), 0.0099, 5e-5));
        assert_eq!(gof_p(0.0, 4).unwrap(), 1.0);
        assert_eq!(gof_p(0.0, 2), Err(TrendError::Saturated(2)));
    }

    #[test]
    fn infinite_divergence_is_flagged() {
        let t = table(&[(1.0, 10, 0), (2.0, 10, 3), (3.0, 10, 6)]);
        let d = divergence_trend(&t, Lambda::REVERSE_KULLBACK).unwrap();
        assert!(d.infinite);
        assert_eq!(d.t, f64::INFINITY);
        assert_eq!(two_sided_p(d.t).unwrap(), 0.0);
        let r = analyze(&t, &[Lambda::REVERSE_KULLBACK], Alternative::Increasing, &AnalyzeOptions::default()).unwrap();
        let row = &r.lambda_results[0];
        assert!(row.infinite);
        assert_eq!(row.p_one_sided, Some(0.0));
        assert_eq!(row.p_gof, Some(0.0));
    }

    #[test]
    fn analyze_reproduces_asbestosis_block() {
        let r = analyze(
            &datasets::ed_asbestosis(),
            &Lambda::standard_set(),
            Alternative::Increasing,
            &AnalyzeOptions::default(),
        )
        .unwrap();
        assert!(r.is_complete());
        assert_eq!(r.direction, Direction::Increasing);
        assert_eq!(r.gof_flag, Some(false));
        let want_t = [6.9869, 6.8712, 6.7664, 6.6430, 6.5878, 6.5130, 6.4472];
        let want_1s = [0.0041, 0.0044, 0.0046, 0.0050, 0.0051, 0.0053, 0.0055];
        for ((row, t), p1) in r.lambda_results.iter().zip(want_t).zip(want_1s) {
            assert!(close(row.t.unwrap(), t, 5e-5), "λ={}: {:?}", row.lambda, row.t);
            assert!(close(row.p_one_sided.unwrap(), p1, 1e-4));
            assert!(row.p_one_sided.unwrap() <= row.p_two_sided.unwrap());
        }
        let text = r.to_text();
        assert!(text.contains("6.7664"));
        assert!(text.contains("Cochran-Armitage"));
    }

    #[test]
    fn decreasing_alternative() {
        let t = table(&[(0.0, 10, 5), (1.0, 10, 2)]);
        let opts = AnalyzeOptions::default();
        let dec = analyze(&t, &[Lambda::KULLBACK], Alternative::Decreasing, &opts).unwrap();
        let inc = analyze(&t, &[Lambda::KULLBACK], Alternative::Increasing, &opts).unwrap();
        assert!(dec.lambda_results[0].p_one_sided.unwrap() < 0.5);
        assert_eq!(inc.lambda_results[0].p_one_sided, Some(1.0));
        assert_eq!(dec.direction, Direction::Decreasing);
        assert!(dec.ca.as_ref().unwrap().p_one_sided < 0.5);
        assert!(inc.ca.as_ref().unwrap().p_one_sided > 0.5);
        // Two groups: the logit model is saturated and has no GOF test.
        assert_eq!(dec.gof_flag, None);
        assert_eq!(dec.lambda_results[0].p_gof, None);
        // Restricted fit lies on the null side of the tested direction.
        assert_eq!(inc.restricted.as_ref().unwrap().beta, inc.beta_hat.unwrap());
        assert_eq!(dec.restricted.as_ref().unwrap().beta, 0.0);
    }

    #[test]
    fn column_swap_keeps_two_sided_results() {
        let t = datasets::ed_pleural_plaques();
        let opts = AnalyzeOptions::default();
        let a = analyze(&t, &Lambda::standard_set(), Alternative::TwoSided, &opts).unwrap();
        let b = analyze(&t.swap_columns(), &Lambda::standard_set(), Alternative::TwoSided, &opts).unwrap();
        for (x, y) in a.lambda_results.iter().zip(&b.lambda_results) {
            assert!(close(x.t.unwrap(), y.t.unwrap(), 1e-9));
            assert!(close(x.p_two_sided.unwrap(), y.p_two_sided.unwrap(), 1e-12));
            assert!(close(x.q2.unwrap(), y.q2.unwrap(), 1e-9));
        }
    }

    #[test]
    fn partial_report_on_separated_data() {
        let t = table(&[(1.0, 10, 0), (2.0, 10, 0), (3.0, 10, 4)]);
        let r = analyze(&t, &[Lambda::KULLBACK], Alternative::Increasing, &AnalyzeOptions::default()).unwrap();
        assert!(!r.is_complete());
        assert!(r.ca.is_some());
        assert!(r.lambda_results[0].t.is_none());
        assert!(analyze(&t, &[], Alternative::Increasing, &AnalyzeOptions::default()).is_err());
    }
}
