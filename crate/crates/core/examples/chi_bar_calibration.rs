//! Null distribution of the one-sided likelihood ratio trend statistic.
//!
//! Under homogeneity about half the samples have a non-positive slope
//! estimate, so the statistic is zero; the positive part is close to χ²₁.

use monotrend::sim::{builtin_scenarios, draw_statistics};
use monotrend::specfun::chi2_sf;
use monotrend::Lambda;

pub fn main() {
    let scenario = builtin_scenarios()[2].scaled(10);
    let draws = draw_statistics(&scenario, 0.3, 0.0, Lambda::KULLBACK, 2_000, 2024).unwrap();
    let zeros = draws.iter().filter(|d| d.t_one_sided == 0.0).count();
    println!("samples: {}  mass at zero: {:.3}", draws.len(), zeros as f64 / draws.len() as f64);

    let mut positive: Vec<f64> = draws.iter().map(|d| d.t_one_sided).filter(|&t| t > 0.0).collect();
    positive.sort_by(f64::total_cmp);
    let m = positive.len() as f64;
    let ks = positive
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let cdf = 1.0 - chi2_sf(t, 1).unwrap();
            (cdf - i as f64 / m).abs().max(((i + 1) as f64 / m - cdf).abs())
        })
        .fold(0.0, f64::max);
    println!("KS distance of the positive part to χ²₁: {ks:.4}");
}
