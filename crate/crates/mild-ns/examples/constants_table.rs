//! Compute the explicit constants controlling the existence theory and
//! audit the product identities delta = beta gamma, eta = r' alpha delta.

use mild_ns::constants::{beta_constant, eta_table};

fn main() -> mild_ns::Result<()> {
    println!("beta(0)   = {:.12} (exactly 2)", beta_constant(0.0)?);
    println!("beta(1/2) = {:.12} (exactly pi)", beta_constant(0.5)?);

    let table = eta_table(2, &[f64::INFINITY, 8.0, 6.0, 4.0, 3.0])?;
    println!(
        "n = {}: alpha = {:.9}, gamma = {:.9} (extrapolation consistency {:.2e})",
        table.n, table.alpha, table.gamma, table.provenance.gamma_consistency
    );
    println!(
        "{:>8} {:>10} {:>12} {:>12} {:>12}",
        "r", "r'", "beta", "delta", "eta"
    );
    for row in &table.rows {
        println!(
            "{:>8} {:>10.6} {:>12.6} {:>12.6} {:>12.6}",
            if row.r.is_infinite() {
                "inf".to_string()
            } else {
                format!("{}", row.r)
            },
            row.r_conjugate,
            row.beta,
            row.delta,
            row.eta
        );
        assert_eq!(row.delta, row.beta * table.gamma);
        assert_eq!(row.eta, row.r_conjugate * table.alpha * row.delta);
    }
    println!("identity audit passed: delta = beta gamma and eta = r' alpha delta, exactly");
    Ok(())
}
