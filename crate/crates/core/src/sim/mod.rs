//! Seeded Monte Carlo estimates of exact size and power.
//!
//! For every grid value `p` and replication the harness draws
//! `N_i1 ~ Binomial(n_i, π_i)` with `π_i = expit(logit(p) + β (x_i - x̄))`,
//! where `x̄` is the trial-weighted mean dose, and records whether each
//! configured test rejects at the nominal level. Samples on which a test is
//! undefined (pooled proportion 0 or 1, separated data, failed fit) are
//! counted separately and excluded from that test's denominator.

mod sampling;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use sampling::{binomial, child_stream, uniform};


use crate::divergence::Lambda;
use crate::logit::{self, expit, logit as logit_fn};
use crate::table::DoseResponseTable;
use crate::trend::{self, divergence_trend_from_fits, trend_p_values};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("invalid simulation spec: {0}")]
    Spec(String),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimScenario {
    pub name: String,
    pub doses: Vec<f64>,
    pub group_sizes: Vec<u64>,
}

impl SimScenario {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.doses.len() != self.group_sizes.len() {
            return Err(SimError::Scenario(format!(
                "{} doses but {} group sizes",
                self.doses.len(),
                self.group_sizes.len()
            )));
        }
        if self.doses.len() < 2 {
            return Err(SimError::Scenario("at least 2 dose groups are required".into()));
        }
        if self.doses.iter().any(|x| !x.is_finite()) || self.doses.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SimError::Scenario("doses must be finite and strictly increasing".into()));
        }
        if self.group_sizes.contains(&0) {
            return Err(SimError::Scenario("group sizes must be positive".into()));
        }
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.group_sizes.iter().sum()
    }

    /// Trial-weighted mean dose.
    pub fn mean_dose(&self) -> f64 {
        self.doses
            .iter()
            .zip(&self.group_sizes)
            .map(|(x, &n)| x * n as f64)
            .sum::<f64>()
            / self.total() as f64
    }

    /// Same doses with every group size multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Self {
        Self {
            name: format!("{}x{}", self.name, factor),
            doses: self.doses.clone(),
            group_sizes: self.group_sizes.iter().map(|n| n * factor).collect(),
        }
    }

    /// Success probabilities per group at null probability `p` and slope `beta`.
    pub fn success_probs(&self, p: f64, beta: f64) -> Vec<f64> {
        if beta == 0.0 {
            return vec![p; self.doses.len()];
        }
        let centre = self.mean_dose();
        let a = logit_fn(p);
        self.doses.iter().map(|x| expit(a + beta * (x - centre))).collect()
    }
}

/// The three designs at doses (10, 24.5, 32.5, 43): balanced n = 100,
/// unbalanced n = 130 and unbalanced n = 210.
pub fn builtin_scenarios() -> Vec<SimScenario> {
    let doses = vec![10.0, 24.5, 32.5, 43.0];
    [
        ("scenario-1", [25, 25, 25, 25]),
        ("scenario-2", [30, 40, 35, 25]),
        ("scenario-3", [50, 60, 55, 45]),
    ]
    .into_iter()
    .map(|(name, sizes)| SimScenario {
        name: name.to_string(),
        doses: doses.clone(),
        group_sizes: sizes.to_vec(),
    })
    .collect()
}

/// `points` equally spaced null probabilities `k / (points + 1)`.
pub fn default_p_grid(points: usize) -> Vec<f64> {
    let m = (points + 1) as f64;
    (1..=points).map(|k| k as f64 / m).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TestId {
    /// Cochran-Armitage.
    Ca,
    /// Power-divergence statistic `T_λ`.
    Pd { lambda: Lambda },
}

impl TestId {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Ca => "ca",
            Self::Pd { .. } => "pd",
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match self {
            Self::Ca => None,
            Self::Pd { lambda } => Some(lambda.value()),
        }
    }
}

impl std::str::FromStr for TestId {
    type Err = String;

    /// Accepts `ca` and `pd:<lambda>`, where lambda may be a fraction such as `2/3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("ca") {
            return Ok(Self::Ca);
        }
        match s.split_once(':') {
            Some(("pd", v)) => {
                let l = parse_real(v)?;
                Ok(Self::Pd {
                    lambda: Lambda::new(l).map_err(|e| e.to_string())?,
                })
            }
            _ => Err(format!("unknown test `{s}` (expected `ca` or `pd:<lambda>`)")),
        }
    }
}

/// Parses a decimal or a simple fraction `a/b`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
            if b == 0.0 {
                return Err(format!("`{s}` divides by zero"));
            }
            a / b
        }
        None => s.parse().map_err(|_| format!("`{s}` is not a number"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    /// Alternative `β > 0`.
    OneSided,
    TwoSided,
}

impl Sidedness {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::OneSided => "one_sided",
            Self::TwoSided => "two_sided",
        }
    }
}

/// How replication streams relate across grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// One stream per grid point and replication.
    #[default]
    Independent,
    /// Grid points `p` and `1 - p` share streams and draw `N` and `n - N`.
    Mirror,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    pub scenario: SimScenario,
    pub tests: Vec<TestId>,
    pub sidedness: Sidedness,
    pub nominal_level: f64,
    pub p_grid: Vec<f64>,
    #[serde(default)]
    pub beta: f64,
    pub replications: u64,
    pub master_seed: u64,
    #[serde(default)]
    pub coupling: Coupling,
}

impl SimSpec {
    pub fn validate(&self) -> Result<(), SimError> {
        self.scenario.validate()?;
        if self.tests.is_empty() {
            return Err(SimError::Spec("no tests configured".into()));
        }
        if !(self.nominal_level > 0.0 && self.nominal_level <= 1.0) {
            return Err(SimError::Spec(format!("nominal level {} outside (0, 1]", self.nominal_level)));
        }
        if self.p_grid.is_empty() {
            return Err(SimError::Spec("empty probability grid".into()));
        }
        if let Some(p) = self.p_grid.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
            return Err(SimError::Spec(format!("grid value {p} outside (0, 1)")));
        }
        if !self.beta.is_finite() {
            return Err(SimError::Spec("beta must be finite".into()));
        }
        if self.replications == 0 {
            return Err(SimError::Spec("replications must be positive".into()));
        }
        if self.coupling == Coupling::Mirror {
            self.mirror_index()?;
        }
        Ok(())
    }

    /// For mirror coupling: index of the grid point holding `1 - p` for each `p`.
    fn mirror_index(&self) -> Result<Vec<usize>, SimError> {
        self.p_grid
            .iter()
            .map(|&p| {
                self.p_grid
                    .iter()
                    .position(|&q| (p + q - 1.0).abs() < 1e-12)
                    .ok_or_else(|| SimError::Spec(format!("mirror coupling needs 1 - {p} in the grid")))
            })
            .collect()
    }
}

/// One row of the result table: a grid point and a test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRow {
    pub scenario: String,
    pub test: String,
    pub lambda: Option<f64>,
    pub sidedness: Sidedness,
    pub p: f64,
    pub beta: f64,
    pub reps: u64,
    pub rejections: u64,
    pub rate: f64,
    pub se: f64,
    pub degenerate: u64,
}

impl SimRow {
    pub fn effective_reps(&self) -> u64 {
        self.reps - self.degenerate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub master_seed: u64,
    pub rows: Vec<SimRow>,
}

impl SimResult {
    pub fn row(&self, p: f64, test: &TestId) -> Option<&SimRow> {
        self.rows
            .iter()
            .find(|r| (r.p - p).abs() < 1e-12 && r.test == test.name() && r.lambda == test.lambda())
    }

    /// CSV with header
    /// `scenario,test,lambda,sidedness,p,beta,reps,rejections,rate,se,degenerate`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("in-memory CSV write");
        }
        String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
    }
}

/// Outcome of one test on one simulated table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Reject,
    Accept,
    Degenerate,
}

/// p-values of every configured test on one table; `None` where undefined.
pub fn evaluate_tests(table: &DoseResponseTable, tests: &[TestId], sidedness: Sidedness) -> Vec<Option<f64>> {
    let need_fit = tests.iter().any(|t| matches!(t, TestId::Pd { .. }));
    let fits = if need_fit {
        logit::fit_homogeneous(table).ok().zip(logit::fit_logit(table).ok())
    } else {
        None
    };
    tests
        .iter()
        .map(|test| match test {
            TestId::Ca => trend::cochran_armitage(table).ok().map(|ca| match sidedness {
                Sidedness::OneSided => ca.p_one_sided,
                Sidedness::TwoSided => ca.p_two_sided,
            }),
            TestId::Pd { lambda } => {
                let (h, f) = fits.as_ref()?;
                let d = divergence_trend_from_fits(table, h, f, *lambda).ok()?;
                let (p1, p2) = trend_p_values(d.t, f.beta).ok()?;
                Some(match sidedness {
                    Sidedness::OneSided => p1,
                    Sidedness::TwoSided => p2,
                })
            }
        })
        .collect()
}

const BLOCK: u64 = 512;

/// Runs the simulation on the global rayon pool.
pub fn run_simulation(spec: &SimSpec) -> Result<SimResult, SimError> {
    spec.validate()?;
    Ok(simulate(spec))
}

/// Runs the simulation on a dedicated pool of `workers` threads (0 = rayon's
/// default). The result does not depend on the worker count.
pub fn run_simulation_with_workers(spec: &SimSpec, workers: usize) -> Result<SimResult, SimError> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SimError::Pool(e.to_string()))?;
    Ok(pool.install(|| simulate(spec)))
}

/// Per-group sampling plan: probability at most ½ plus a reflection flag.
fn draw_plan(spec: &SimSpec, g: usize, mirror: Option<&[usize]>) -> Vec<(f64, bool)> {
    let p = spec.p_grid[g];
    if let Some(mirror) = mirror {
        if spec.beta == 0.0 && p > 0.5 {
            // Use the partner's grid value bit-for-bit so the draws mirror exactly.
            let low = spec.p_grid[mirror[g]];
            return vec![(low, true); spec.scenario.doses.len()];
        }
    }
    spec.scenario
        .success_probs(p, spec.beta)
        .into_iter()
        .map(|pi| if pi > 0.5 { (1.0 - pi, true) } else { (pi, false) })
        .collect()
}

fn stream_key(g: usize, spec: &SimSpec, mirror: Option<&[usize]>) -> u64 {
    match mirror {
        Some(m) if spec.p_grid[g] > 0.5 => m[g] as u64,
        _ => g as u64,
    }
}

fn simulate(spec: &SimSpec) -> SimResult {
    let mirror = match spec.coupling {
        Coupling::Mirror => Some(spec.mirror_index().expect("validated")),
        Coupling::Independent => None,
    };
    let tests = &spec.tests;
    let mut rows = Vec::with_capacity(spec.p_grid.len() * tests.len());
    for g in 0..spec.p_grid.len() {
        let plan = draw_plan(spec, g, mirror.as_deref());
        let key = stream_key(g, spec, mirror.as_deref());
        let blocks = spec.replications.div_ceil(BLOCK);
        let counts = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut local = vec![(0u64, 0u64); tests.len()];
                let end = ((b + 1) * BLOCK).min(spec.replications);
                for r in b * BLOCK..end {
                    let table = draw_table(spec, &plan, key, r);
                    for (slot, outcome) in local.iter_mut().zip(decide(&table, spec)) {
                        match outcome {
                            Outcome::Reject => slot.0 += 1,
                            Outcome::Degenerate => slot.1 += 1,
                            Outcome::Accept => {}
                        }
                    }
                }
                local
            })
            .reduce(
                || vec![(0, 0); tests.len()],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        x.0 += y.0;
                        x.1 += y.1;
                    }
                    a
                },
            );
        for (test, (rejections, degenerate)) in tests.iter().zip(counts) {
            let effective = spec.replications - degenerate;
            let (rate, se) = if effective == 0 {
                (f64::NAN, f64::NAN)
            } else {
                let r = rejections as f64 / effective as f64;
                (r, (r * (1.0 - r) / effective as f64).sqrt())
            };
            rows.push(SimRow {
                scenario: spec.scenario.name.clone(),
                test: test.name().to_string(),
                lambda: test.lambda(),
                sidedness: spec.sidedness,
                p: spec.p_grid[g],
                beta: spec.beta,
                reps: spec.replications,
                rejections,
                rate,
                se,
                degenerate,
            });
        }
    }
    SimResult {
        master_seed: spec.master_seed,
        rows,
    }
}

/// Per-replication outcomes of every test at grid point `grid_index`, using
/// the same streams as [`run_simulation`]. Useful for paired comparisons of
/// tests evaluated on the same samples.
pub fn replication_outcomes(spec: &SimSpec, grid_index: usize) -> Result<Vec<Vec<Outcome>>, SimError> {
    spec.validate()?;
    if grid_index >= spec.p_grid.len() {
        return Err(SimError::Spec(format!("grid index {grid_index} out of range")));
    }
    let mirror = match spec.coupling {
        Coupling::Mirror => Some(spec.mirror_index()?),
        Coupling::Independent => None,
    };
    let plan = draw_plan(spec, grid_index, mirror.as_deref());
    let key = stream_key(grid_index, spec, mirror.as_deref());
    Ok((0..spec.replications)
        .into_par_iter()
        .map(|r| decide(&draw_table(spec, &plan, key, r), spec))
        .collect())
}

fn draw_table(spec: &SimSpec, plan: &[(f64, bool)], key: u64, replication: u64) -> DoseResponseTable {
    let mut rng = child_stream(spec.master_seed, key, replication);
    let successes = spec
        .scenario
        .group_sizes
        .iter()
        .zip(plan)
        .map(|(&n, &(low, reflect))| sampling::binomial_reflected(n, low, reflect, &mut rng))
        .collect();
    DoseResponseTable::new(spec.scenario.doses.clone(), spec.scenario.group_sizes.clone(), successes)
        .expect("scenario validated")
}

fn decide(table: &DoseResponseTable, spec: &SimSpec) -> Vec<Outcome> {
    evaluate_tests(table, &spec.tests, spec.sidedness)
        .into_iter()
        .map(|p| match p {
            None => Outcome::Degenerate,
            Some(p) if p <= spec.nominal_level => Outcome::Reject,
            Some(_) => Outcome::Accept,
        })
        .collect()
}

/// Raw statistics from one simulated table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatisticDraw {
    /// Two-sided `T_λ`.
    pub t: f64,
    /// One-sided statistic: `T_λ` when `β̂ > 0`, else 0.
    pub t_one_sided: f64,
    pub q2: f64,
    pub beta_hat: f64,
}

/// Draws `replications` tables at `(p, beta)` and returns `T_λ`, `Q²_λ` and
/// `β̂` for every non-degenerate one, in replication order.
pub fn draw_statistics(
    scenario: &SimScenario,
    p: f64,
    beta: f64,
    lambda: Lambda,
    replications: u64,
    master_seed: u64,
) -> Result<Vec<StatisticDraw>, SimError> {
    scenario.validate()?;
    if !(p > 0.0 && p < 1.0) {
        return Err(SimError::Spec(format!("probability {p} outside (0, 1)")));
    }
    let plan: Vec<(f64, bool)> = scenario
        .success_probs(p, beta)
        .into_iter()
        .map(|pi| if pi > 0.5 { (1.0 - pi, true) } else { (pi, false) })
        .collect();
    let spec = SimSpec {
        scenario: scenario.clone(),
        tests: vec![TestId::Pd { lambda }],
        sidedness: Sidedness::TwoSided,
        nominal_level: 0.05,
        p_grid: vec![p],
        beta,
        replications,
        master_seed,
        coupling: Coupling::Independent,
    };
    let draws: Vec<Option<StatisticDraw>> = (0..replications)
        .into_par_iter()
        .map(|r| {
            let table = draw_table(&spec, &plan, 0, r);
            let h = logit::fit_homogeneous(&table).ok()?;
            let f = logit::fit_logit(&table).ok()?;
            let d = divergence_trend_from_fits(&table, &h, &f, lambda).ok()?;
            Some(StatisticDraw {
                t: d.t,
                t_one_sided: if f.beta > 0.0 { d.t } else { 0.0 },
                q2: d.q2,
                beta_hat: f.beta,
            })
        })
        .collect();
    Ok(draws.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(tests: Vec<TestId>, level: f64, reps: u64) -> SimSpec {
        SimSpec {
            scenario: builtin_scenarios()[0].clone(),
            tests,
            sidedness: Sidedness::TwoSided,
            nominal_level: level,
            p_grid: vec![0.3, 0.5],
            beta: 0.0,
            replications: reps,
            master_seed: 1,
            coupling: Coupling::Independent,
        }
    }

    #[test]
    fn grid() {
        let g = default_p_grid(29);
        assert_eq!(g.len(), 29);
        assert!((g[0] - 1.0 / 30.0).abs() < 1e-15);
        assert_eq!(g[14], 0.5);
        assert!((g[28] - 29.0 / 30.0).abs() < 1e-15);
        assert_eq!(default_p_grid(1), vec![0.5]);
        assert_eq!(default_p_grid(3), vec![0.25, 0.5, 0.75]);
    }

    #[test]
    fn scenarios() {
        let s = builtin_scenarios();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].total(), 100);
        assert_eq!(s[1].total(), 130);
        assert_eq!(s[2].total(), 210);
        assert!(s.iter().all(|s| s.doses.len() == 4 && s.validate().is_ok()));
    }

    #[test]
    fn zero_slope_keeps_grid_probability() {
        let s = &builtin_scenarios()[1];
        assert!(s.success_probs(0.3, 0.0).iter().all(|&p| p == 0.3));
        let probs = s.success_probs(0.3, 0.05);
        assert!(probs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn level_one_always_rejects() {
        let lam = Lambda::new(2.0 / 3.0).unwrap();
        let res = run_simulation(&spec(vec![TestId::Ca, TestId::Pd { lambda: lam }], 1.0, 300)).unwrap();
        for row in &res.rows {
            assert_eq!(row.rejections, row.effective_reps());
            assert_eq!(row.rate, 1.0);
        }
    }

    #[test]
    fn test_ids_parse() {
        assert_eq!("ca".parse::<TestId>().unwrap(), TestId::Ca);
        let pd: TestId = "pd:2/3".parse().unwrap();
        assert_eq!(pd.lambda(), Some(2.0 / 3.0));
        assert!("pd:x".parse::<TestId>().is_err());
        assert!("wald".parse::<TestId>().is_err());
    }

    #[test]
    fn invalid_specs() {
        assert!(run_simulation(&spec(vec![TestId::Ca], 0.05, 0)).is_err());
        assert!(run_simulation(&spec(vec![], 0.05, 10)).is_err());
        let mut s = spec(vec![TestId::Ca], 0.05, 10);
        s.p_grid = vec![0.0];
        assert!(run_simulation(&s).is_err());
        let mut s = spec(vec![TestId::Ca], 0.05, 10);
        s.coupling = Coupling::Mirror;
        assert!(run_simulation(&s).is_err(), "0.7 is missing from the grid");
    }

    #[test]
    fn csv_layout() {
        let res = run_simulation(&spec(vec![TestId::Ca], 0.05, 50)).unwrap();
        let csv = res.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "scenario,test,lambda,sidedness,p,beta,reps,rejections,rate,se,degenerate");
        assert!(lines.next().unwrap().starts_with("scenario-1,ca,,two_sided,0.3,0.0,50,"));
    }

    #[test]
    fn spec_json_round_trip() {
        let s = spec(vec![TestId::Ca, TestId::Pd { lambda: Lambda::KULLBACK }], 0.05, 10);
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains(r#"{"kind":"pd","lambda":0.0}"#));
        let back: SimSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
