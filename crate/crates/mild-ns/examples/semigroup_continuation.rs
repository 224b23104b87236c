//! Continue a solve past its horizon by restarting from a snapshot: the
//! semigroup identity makes the restarted run agree with a direct longer
//! run wherever they overlap (uniqueness on the lattice).

use mild_ns::constants::eta_table;
use mild_ns::grid::Grid;
use mild_ns::initial::{generate, InitialData};
use mild_ns::solver::{extend, picard_solve, SolveConfig};

fn main() -> mild_ns::Result<()> {
    let grid = Grid::new(2, 64, 2.0 * std::f64::consts::PI)?;
    // amplitude 0.1 keeps the restart smallness criterion satisfied
    let f = generate(grid, &InitialData::TaylorGreen)?.scaled(0.1);
    let table = eta_table(2, &[f64::INFINITY])?;

    let cfg = SolveConfig {
        horizon: 0.25,
        nodes: 16,
        ..Default::default()
    };
    let first = picard_solve(&f, &cfg, &table)?;
    println!(
        "first leg: converged = {}, horizon T = {}",
        first.converged, cfg.horizon
    );

    let extended = extend(&first, 0.25, 0.25, &cfg, &table)?;
    println!(
        "extended to T = {}: {} nodes, overlap gap {:.3e}",
        extended.trajectory.horizon(),
        extended.trajectory.len(),
        extended.overlap_gap.unwrap_or(0.0)
    );

    let direct_cfg = SolveConfig {
        horizon: 0.5,
        nodes: 32,
        ..Default::default()
    };
    let direct = picard_solve(&f, &direct_cfg, &table)?;
    let mut worst: f64 = 0.0;
    for (j, &t) in extended.trajectory.times().iter().enumerate() {
        let k = direct.trajectory.node_index(t)?;
        worst = worst.max(
            extended
                .trajectory
                .field(j)
                .max_abs_diff(direct.trajectory.field(k)),
        );
    }
    println!("restart-vs-direct sup gap over all nodes: {worst:.3e}");
    Ok(())
}
