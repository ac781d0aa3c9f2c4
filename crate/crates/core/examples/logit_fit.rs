//! Maximum likelihood fits of the homogeneous and linear logit models.

use monotrend::{datasets, fit_homogeneous, fit_logit, fit_restricted_nonpositive};

pub fn main() {
    for (name, table) in [
        ("pleural plaques", datasets::ed_pleural_plaques()),
        ("asbestosis", datasets::ed_asbestosis()),
    ] {
        let h = fit_homogeneous(&table).unwrap();
        let f = fit_logit(&table).unwrap();
        println!("{name}");
        println!("  pooled proportion   {:.4}", h.pooled_prob);
        println!(
            "  alpha, beta         {:.5}, {:.5}  ({} iterations)",
            f.alpha, f.beta, f.iterations
        );
        let fitted: Vec<String> = f.fitted_success_probs.iter().map(|p| format!("{p:.4}")).collect();
        println!("  fitted proportions  {}", fitted.join("  "));
        println!("  log-likelihood      {:.4}", f.log_likelihood);

        // Under the restriction beta <= 0 an increasing trend collapses to homogeneity.
        let r = fit_restricted_nonpositive(&table).unwrap();
        println!("  restricted beta     {:.5}", r.beta);
    }
}
