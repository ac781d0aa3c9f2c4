//! Normal and chi-square tail probabilities used for every p-value.

use monotrend::specfun::{chi2_sf, normal_sf};

pub fn main() {
    println!("{:>6}  {:>12}", "z", "P(Z > z)");
    for z in [-1.0, 0.0, 1.645, 1.96, 2.5842, 5.0, 10.0] {
        println!("{z:>6}  {:>12.6e}", normal_sf(z).unwrap());
    }

    println!();
    println!("{:>8}  {:>12}  {:>12}", "t", "χ²₁ tail", "χ²₂ tail");
    for t in [0.1575, 3.8415, 6.7664, 9.2358, 45.9821] {
        println!(
            "{t:>8}  {:>12.6e}  {:>12.6e}",
            chi2_sf(t, 1).unwrap(),
            chi2_sf(t, 2).unwrap()
        );
    }

    // One-sided chi-bar-square p-value for a positive slope estimate.
    let t = 6.7664;
    println!("\n½ P(χ²₁ ≥ {t}) = {:.4}", 0.5 * chi2_sf(t, 1).unwrap());
}
