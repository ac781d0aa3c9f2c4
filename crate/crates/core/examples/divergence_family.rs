//! The power-divergence family between two probability vectors.

use monotrend::divergence::{KullbackPhi, PowerPhi};
use monotrend::{kullback, phi_divergence, power_divergence, Lambda};

pub fn main() {
    let p = [0.10, 0.25, 0.40, 0.25];
    let q = [0.20, 0.30, 0.30, 0.20];

    println!("{:>8}  {:>12}", "lambda", "d_lambda");
    for lambda in Lambda::standard_set() {
        println!("{:>8.4}  {:>12.8}", lambda.value(), power_divergence(&p, &q, lambda).unwrap());
    }

    let pearson: f64 = p.iter().zip(&q).map(|(a, b)| (a - b) * (a - b) / b).sum();
    println!("\nλ = 1 against half Pearson: {:.8} vs {:.8}", power_divergence(&p, &q, Lambda::PEARSON).unwrap(), 0.5 * pearson);
    println!("Kullback-Leibler:           {:.8}", kullback(&p, &q).unwrap());
    println!("phi form, λ = 0:            {:.8}", phi_divergence(&p, &q, &KullbackPhi).unwrap());
    println!(
        "phi form, λ = 2/3:          {:.8}",
        phi_divergence(&p, &q, &PowerPhi(Lambda::CRESSIE_READ)).unwrap()
    );
}
