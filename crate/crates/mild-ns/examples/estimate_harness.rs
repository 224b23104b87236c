//! Run the operator-estimate harness on random divergence-free trajectories
//! and print the worst ratio per estimate family. Every ratio must stay at
//! or below 1 (up to roundoff slack): the computed constants are admissible.

use std::collections::BTreeMap;

use mild_ns::constants::eta_table;
use mild_ns::estimates::full_harness;

fn main() -> mild_ns::Result<()> {
    let table = eta_table(2, &[f64::INFINITY, 4.0])?;
    let rows = full_harness(&table, 20, 2024)?;

    let mut worst: BTreeMap<&'static str, (f64, String)> = BTreeMap::new();
    let mut violations = 0;
    for row in &rows {
        if !row.holds() {
            violations += 1;
        }
        let entry = worst.entry(row.estimate).or_insert((0.0, String::new()));
        if row.ratio() > entry.0 {
            *entry = (row.ratio(), row.case.clone());
        }
    }
    println!(
        "{} inequality instances checked, {violations} violations",
        rows.len()
    );
    for (estimate, (ratio, case)) in &worst {
        println!("{estimate:>12}: worst ratio {ratio:.6} ({case})");
    }
    Ok(())
}
