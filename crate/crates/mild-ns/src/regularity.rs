//! Continuity diagnostics for computed trajectories: Hoelder quotients in
//! space, the sup-norm bound bracket they are compared against, and the
//! continuity modulus of t -> u(t) in Lorentz norms.
//!
//! Every bound here carries an unspecified absolute constant in the theory,
//! so the checks are ratio/stability checks: the quotient-to-bracket ratio
//! must stay within a bounded spread along the trajectory, and the
//! continuity modulus must shrink under lattice refinement.

use rayon::prelude::*;

use crate::duhamel::Trajectory;
use crate::error::{Error, Result};
use crate::grid::{Field, MAX_DIMENSION};
use crate::lorentz::{lorentz_value, LorentzIndex, Rearrangement};

/// Max over node pairs within `radius_cap` (periodic distance) of
/// |u(x) - u(y)| / |x - y|^alpha.
pub fn holder_quotient(field: &Field, alpha: f64, radius_cap: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} outside (0, 1)")));
    }
    let grid = field.grid();
    let h = grid.spacing();
    if radius_cap < h {
        return Err(Error::Domain(format!(
            "radius cap {radius_cap} below the node spacing {h}"
        )));
    }
    let n = grid.dimension();
    let npts = grid.points_per_axis() as i64;
    let max_steps = ((radius_cap / h).floor() as i64).min(npts / 2);

    // enumerate offsets within the cap once
    let mut offsets: Vec<(Vec<i64>, f64)> = Vec::new();
    let mut stack = vec![0i64; n];
    enumerate_offsets(&mut stack, 0, max_steps, h, radius_cap, &mut offsets);

    let comps = field.component_count();
    let best = offsets
        .par_iter()
        .map(|(offset, dist)| {
            let mut idx = [0usize; MAX_DIMENSION];
            let mut worst: f64 = 0.0;
            for flat in 0..grid.node_count() {
                grid.decode(flat, &mut idx[..n]);
                let mut neighbor = 0usize;
                for a in 0..n {
                    let shifted = (idx[a] as i64 + offset[a]).rem_euclid(npts) as usize;
                    neighbor = neighbor * npts as usize + shifted;
                }
                let mut d2 = 0.0;
                for c in 0..comps {
                    let d = field.component(c)[flat] - field.component(c)[neighbor];
                    d2 += d * d;
                }
                worst = worst.max(d2);
            }
            worst.sqrt() / dist.powf(alpha)
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

fn enumerate_offsets(
    stack: &mut Vec<i64>,
    axis: usize,
    max_steps: i64,
    h: f64,
    radius_cap: f64,
    out: &mut Vec<(Vec<i64>, f64)>,
) {
    if axis == stack.len() {
        let d2: f64 = stack.iter().map(|&s| (s as f64 * h).powi(2)).sum();
        let dist = d2.sqrt();
        if dist > 0.0 && dist <= radius_cap {
            out.push((stack.clone(), dist));
        }
        return;
    }
    for step in -max_steps..=max_steps {
        stack[axis] = step;
        enumerate_offsets(stack, axis + 1, max_steps, h, radius_cap, out);
    }
    stack[axis] = 0;
}

/// The sup-norm bracket the Hoelder quotient is compared against:
///
/// ```text
/// ||u(t0)||_sup / (t - t0)^{alpha/2}
///     + int_{t0}^{t} ||u(s)||_sup^2 / (t - s)^{(1+alpha)/2} ds
/// ```
///
/// with the singular factor integrated exactly per slab and the sup-norm
/// series taken at slab midpoints.
pub fn holder_bound_bracket(
    traj: &Trajectory,
    t0_idx: usize,
    t_idx: usize,
    alpha: f64,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} outside (0, 1)")));
    }
    if t0_idx >= t_idx || t_idx >= traj.len() {
        return Err(Error::Domain(format!(
            "need t0 < t within the lattice, got indices {t0_idx}, {t_idx}"
        )));
    }
    let times = traj.times();
    let sups = traj.sup_norms();
    let t0 = times[t0_idx];
    let t = times[t_idx];
    let mut bracket = sups[t0_idx] / (t - t0).powf(alpha / 2.0);
    let weight_exp = 0.5 * (1.0 - alpha);
    for j in t0_idx..t_idx {
        let (a, b) = (times[j], times[j + 1]);
        let mid = 0.5 * (sups[j] + sups[j + 1]);
        // int_a^b (t-s)^{-(1+alpha)/2} ds in closed form
        let weight = ((t - a).powf(weight_exp) - (t - b).powf(weight_exp)) / weight_exp;
        bracket += mid * mid * weight;
    }
    Ok(bracket)
}

/// Per-gap Lorentz-norm differences ||u(t_{j+1}) - u(t_j)||.
pub fn continuity_modulus(traj: &Trajectory, idx: &LorentzIndex) -> Result<Vec<f64>> {
    if traj.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "continuity modulus needs at least 3 nodes, got {}",
            traj.len()
        )));
    }
    let mut gaps = Vec::with_capacity(traj.len() - 1);
    for j in 0..traj.len() - 1 {
        let diff = traj.field(j + 1).sub(traj.field(j));
        gaps.push(lorentz_value(&Rearrangement::from_field(&diff), idx)?);
    }
    Ok(gaps)
}

#[derive(Clone, Debug)]
pub struct HolderSeries {
    pub alpha: f64,
    /// (node index, quotient, bracket, ratio) for nodes after the base node.
    pub rows: Vec<(usize, f64, f64, f64)>,
    /// max/min of the ratio over nodes in the stability window [T/4, T].
    pub ratio_spread: f64,
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub holder: Vec<HolderSeries>,
    /// Continuity gaps per recorded Lorentz index.
    pub continuity: Vec<(LorentzIndex, Vec<f64>)>,
}

/// Full report for a trajectory: Hoelder quotient vs bracket per alpha
/// (base node = first node), plus continuity gaps per index.
pub fn regularity_report(
    traj: &Trajectory,
    alphas: &[f64],
    radius_cap: f64,
    indices: &[LorentzIndex],
) -> Result<RegularityReport> {
    if traj.len() < 3 {
        return Err(Error::InsufficientData("need at least 3 nodes".into()));
    }
    let mut holder = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let mut rows = Vec::new();
        let mut window: Vec<f64> = Vec::new();
        let horizon = traj.horizon();
        for t_idx in 1..traj.len() {
            let quotient = holder_quotient(traj.field(t_idx), alpha, radius_cap)?;
            let bracket = holder_bound_bracket(traj, 0, t_idx, alpha)?;
            let ratio = if bracket > 0.0 {
                quotient / bracket
            } else {
                0.0
            };
            if traj.times()[t_idx] >= horizon / 4.0 && ratio > 0.0 {
                window.push(ratio);
            }
            rows.push((t_idx, quotient, bracket, ratio));
        }
        let spread = match (
            window.iter().cloned().fold(f64::INFINITY, f64::min),
            window.iter().cloned().fold(0.0f64, f64::max),
        ) {
            (min, max) if min > 0.0 && min.is_finite() => max / min,
            _ => 1.0,
        };
        holder.push(HolderSeries {
            alpha,
            rows,
            ratio_spread: spread,
        });
    }
    let mut continuity = Vec::with_capacity(indices.len());
    for idx in indices {
        continuity.push((*idx, continuity_modulus(traj, idx)?));
    }
    Ok(RegularityReport { holder, continuity })
}
