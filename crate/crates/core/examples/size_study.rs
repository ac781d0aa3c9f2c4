//! Monte Carlo size of the two-sided tests on the balanced design.

use monotrend::sim::{builtin_scenarios, default_p_grid, Coupling, Sidedness};
use monotrend::{run_simulation, Lambda, SimSpec, TestId};

pub fn main() {
    let spec = SimSpec {
        scenario: builtin_scenarios()[0].clone(),
        tests: vec![
            TestId::Ca,
            TestId::Pd { lambda: Lambda::KULLBACK },
            TestId::Pd { lambda: Lambda::CRESSIE_READ },
        ],
        sidedness: Sidedness::TwoSided,
        nominal_level: 0.05,
        p_grid: default_p_grid(9),
        beta: 0.0,
        replications: 2_000,
        master_seed: 42,
        coupling: Coupling::Mirror,
    };
    let result = run_simulation(&spec).unwrap();
    println!("{:>5}  {:>10}  {:>8}  {:>8}", "p", "test", "size", "se");
    for row in &result.rows {
        let label = match row.lambda {
            Some(l) => format!("pd:{l:.3}"),
            None => row.test.clone(),
        };
        println!("{:>5.2}  {label:>10}  {:>8.4}  {:>8.4}", row.p, row.rate, row.se);
    }
}
