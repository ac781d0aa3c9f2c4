//! Estimated power against increasing slopes on the unbalanced design.

use monotrend::sim::{builtin_scenarios, Coupling, Sidedness};
use monotrend::{run_simulation, Lambda, SimSpec, TestId};

pub fn main() {
    let tests = vec![
        TestId::Ca,
        TestId::Pd { lambda: Lambda::KULLBACK },
        TestId::Pd { lambda: Lambda::CRESSIE_READ },
    ];
    println!("{:>6}  {:>8}  {:>8}  {:>8}", "beta", "ca", "pd:0", "pd:2/3");
    for beta in [0.0, 0.02, 0.04, 0.06, 0.08] {
        let spec = SimSpec {
            scenario: builtin_scenarios()[1].clone(),
            tests: tests.clone(),
            sidedness: Sidedness::OneSided,
            nominal_level: 0.05,
            p_grid: vec![0.3],
            beta,
            replications: 1_000,
            master_seed: 7,
            coupling: Coupling::Independent,
        };
        let result = run_simulation(&spec).unwrap();
        let rates: Vec<String> = result.rows.iter().map(|r| format!("{:>8.3}", r.rate)).collect();
        println!("{beta:>6.2}  {}", rates.join("  "));
    }
}
