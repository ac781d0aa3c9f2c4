//! Asymptotic tests for monotone trend in binomial proportions across
//! ordered dose groups under a linear logit model.
//!
//! The crate provides the Cochran-Armitage test, the power-divergence family
//! of trend statistics `T_λ = Q¹_λ - Q²_λ` (which contains the likelihood
//! ratio test at `λ = 0`) with one-sided chi-bar-square and two-sided χ²₁
//! p-values, the goodness-of-fit statistic `Q²_λ`, and a seeded Monte Carlo
//! harness for exact size and power.
//!
//! ```
//! use monotrend::{analyze, datasets, Alternative, AnalyzeOptions, Lambda};
//!
//! let table = datasets::ed_asbestosis();
//! let report = analyze(&table, &[Lambda::KULLBACK], Alternative::Increasing, &AnalyzeOptions::default()).unwrap();
//! let lr = &report.lambda_results[0];
//! assert!((lr.t.unwrap() - 6.7664).abs() < 1e-4);
//! ```

pub mod cli;
pub mod datasets;
pub mod divergence;
pub mod logit;
pub mod sim;
pub mod specfun;
pub mod table;
pub mod trend;

pub use divergence::{kullback, phi_divergence, power_divergence, Lambda};
pub use logit::{fit_homogeneous, fit_logit, fit_restricted_nonpositive, joint_model_probs, HomogeneousFit, LogitFit};
pub use sim::{run_simulation, SimResult, SimScenario, SimSpec, TestId};
pub use table::{empirical_joint, parse_table, DoseResponseTable, InputFormat, JointProbVector};
pub use trend::{analyze, cochran_armitage, divergence_trend, Alternative, AnalyzeOptions, TrendReport};
