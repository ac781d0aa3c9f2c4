//! Reading, validating and transforming tables.

use monotrend::table::TableRow;
use monotrend::{empirical_joint, parse_table, DoseResponseTable, InputFormat};

pub fn main() {
    let csv = "dose,n,successes\n32.5,1408,100\n10,1321,71\n24.5,1324,88\n43,1492,116\n";
    let parsed = parse_table(csv.as_bytes(), InputFormat::Csv).unwrap();
    println!("reordered by dose: {}", parsed.reordered);
    print!("{}", parsed.table.to_csv());

    let json = r#"{"rows": [{"dose": 1, "n": 20, "successes": 5}, {"dose": 2, "n": 20, "successes": 25}]}"#;
    match parse_table(json.as_bytes(), InputFormat::Json) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }

    let rows = [
        TableRow { dose: 0.0, n: 40, successes: 4 },
        TableRow { dose: 1.0, n: 40, successes: 9 },
    ];
    let (table, _) = DoseResponseTable::from_unsorted_rows(&rows).unwrap();
    let joint = empirical_joint(&table);
    println!("joint vector: {:?}", joint.entries());
    println!("swapped columns: {:?}", table.swap_columns().successes());
    println!("doses in months: {:?}", table.transform_doses(12.0, 0.0).unwrap().doses());
}
