//! Watch the Picard iteration contract at the predicted rate: for small
//! data with g0 < 1/4, consecutive iterate differences shrink by at least
//! the factor 2 Lambda, where Lambda solves Lambda = g0 + Lambda^2.

use mild_ns::constants::eta_table;
use mild_ns::duhamel::heat_trajectory;
use mild_ns::grid::Grid;
use mild_ns::initial::{generate, InitialData};
use mild_ns::solver::{picard_solve, weighted_path_norm, SolveConfig};

fn main() -> mild_ns::Result<()> {
    let grid = Grid::new(2, 32, 2.0 * std::f64::consts::PI)?;
    let table = eta_table(2, &[f64::INFINITY])?;
    let cfg = SolveConfig {
        horizon: 0.25,
        nodes: 16,
        ..Default::default()
    };

    let raw = generate(
        grid,
        &InitialData::RandomSolenoidal {
            seed: 9,
            spectral_slope: -2.0,
            amplitude: 1.0,
        },
    )?;
    // rescale the datum so the measured g0 lands at 0.08
    let times: Vec<f64> = (1..=cfg.nodes)
        .map(|j| j as f64 * cfg.horizon / cfg.nodes as f64)
        .collect();
    let flow = heat_trajectory(&raw, &times)?;
    let delta = table.delta(f64::INFINITY)?;
    let unit_g0 = delta * cfg.horizon.sqrt() * weighted_path_norm(&flow, 0.0);
    let f = raw.scaled(0.08 / unit_g0);

    let report = picard_solve(&f, &cfg, &table)?;
    let lambda = report.lambda.expect("g0 < 1/4");
    println!(
        "g0 = {:.4}, Lambda = {:.6}, 2 Lambda = {:.6}",
        report.g0,
        lambda,
        2.0 * lambda
    );
    println!("sweep   difference      ratio");
    let mut prev: Option<f64> = None;
    for (m, &d) in report.iteration_diffs.iter().enumerate() {
        match prev {
            Some(p) if p > 0.0 => println!("{:>5}   {d:.6e}   {:.6}", m + 1, d / p),
            _ => println!("{:>5}   {d:.6e}", m + 1),
        }
        prev = Some(d);
    }
    println!(
        "converged: {} after {} sweeps, residual {:.3e}",
        report.converged, report.iterations, report.residual
    );
    Ok(())
}
