//! Certify the heat and Oseen kernels on a large box: closed-form agreement,
//! trace and divergence structure, pointwise decay constants, L^{p,1}
//! scaling and the semigroup property.

use mild_ns::grid::Grid;
use mild_ns::kernels::{
    heat_kernel, kernel_grid, kernel_lorentz_profile, pointwise_decay_constant, semigroup_residual,
    KernelTag, MultiplierSpec,
};

fn main() -> mild_ns::Result<()> {
    let grid = Grid::new(2, 256, 40.0)?;
    let t = 1.0;

    let heat = kernel_grid(&MultiplierSpec::heat(), t, grid, true)?;
    println!("heat kernel: L1 = {:.12} (exact mass 1)", heat.l1_norm());
    println!(
        "closed form at origin: {:.12}",
        heat_kernel(t, &[0.0, 0.0])?
    );
    println!("grid value at origin:  {:.12}", heat.component(0)[0]);

    let oseen = kernel_grid(&MultiplierSpec::oseen(), t, grid, true)?;
    let trace0: f64 = (0..2).map(|i| oseen.oseen_component(i, i)[0]).sum();
    println!(
        "oseen trace at origin = {:.9} vs (n-1) heat + 1/L^n = {:.9}",
        trace0,
        heat.component(0)[0] + 1.0 / grid.box_length().powi(2)
    );

    for spec in [
        MultiplierSpec::heat(),
        MultiplierSpec::with_gradient_axis(KernelTag::Heat, 0)?,
        MultiplierSpec::with_gradient_axis(KernelTag::Oseen, 0)?,
    ] {
        let decay = pointwise_decay_constant(&spec, &[0.25, 1.0, 2.5], grid, true)?;
        println!(
            "{}: decay constant {:.6} (spread {:.2}% across a decade of t)",
            spec.label(),
            decay.constant,
            100.0 * decay.relative_spread
        );
    }

    let profile = kernel_lorentz_profile(&MultiplierSpec::heat(), t, grid, &[1.0, 1.5], true)?;
    for ((p, v), err) in profile
        .ps
        .iter()
        .zip(&profile.values)
        .zip(&profile.scaling_errors)
    {
        println!("||Phi(1)||*_({p},1) = {v:.9}, scaling-law error {err:.2e}");
    }

    for (s, u) in [(0.3, 0.7), (0.5, 0.5), (1e-3, 0.5)] {
        let residual = semigroup_residual(&MultiplierSpec::oseen(), s, u, grid, true)?;
        println!(
            "Phi({s}) * T({u}) vs T({:.3}): residual {residual:.3e}",
            s + u
        );
    }
    Ok(())
}
