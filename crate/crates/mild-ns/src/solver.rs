//! Constructive core: existence horizon, whole-trajectory Picard iteration
//! u^{m+1} = u^0 - B[u^m, u^m] with measured contraction, semigroup
//! continuation, and the blowup-rate monitor.
//!
//! The iteration sweeps entire trajectories (every time node per sweep),
//! mirroring the fixed-point construction rather than a time-marching
//! scheme; that is what makes the 2 Lambda contraction ratio directly
//! measurable. Non-convergence is data, not an error: the report carries
//! the difference history either way.

use crate::constants::ConstantsTable;
use crate::duhamel::{bilinear_all, heat_trajectory, Trajectory};
use crate::error::{Error, Result};
use crate::grid::Field;
use crate::lorentz::{lorentz_value, LorentzIndex, Rearrangement};

#[derive(Clone, Debug)]
pub struct SolveConfig {
    /// Time horizon T.
    pub horizon: f64,
    /// Number of uniform time nodes J (lattice t_j = j T / J).
    pub nodes: usize,
    /// Sup-norm tolerance on iterate differences.
    pub picard_tolerance: f64,
    pub max_iterations: usize,
    /// Subcritical exponent for the smallness criterion; inf by default
    /// (every grid field has finite sup norm).
    pub subcritical_r: f64,
    /// Lorentz indices recorded per node in the report.
    pub record_indices: Vec<LorentzIndex>,
    /// Exponents for the blowup-threshold series.
    pub threshold_rs: Vec<f64>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            horizon: 0.5,
            nodes: 32,
            picard_tolerance: 1e-10,
            max_iterations: 64,
            subcritical_r: f64::INFINITY,
            record_indices: Vec::new(),
            threshold_rs: Vec::new(),
        }
    }
}

impl SolveConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Config(format!(
                "horizon {} must be positive",
                self.horizon
            )));
        }
        if self.nodes < 4 {
            return Err(Error::Config(format!("nodes {} below 4", self.nodes)));
        }
        if !(self.picard_tolerance > 0.0) {
            return Err(Error::Config("picard tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max iterations must be positive".into()));
        }
        if !(self.subcritical_r > n as f64) {
            return Err(Error::Subcritical {
                n,
                r: self.subcritical_r,
            });
        }
        for &r in &self.threshold_rs {
            if !(r > n as f64) {
                return Err(Error::Subcritical { n, r });
            }
        }
        Ok(())
    }

    fn lattice(&self) -> Vec<f64> {
        (1..=self.nodes)
            .map(|j| j as f64 * self.horizon / self.nodes as f64)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PicardSeed {
    /// Start from `u^0 = S[f]`; the construction in the local existence proof.
    HeatFlow,
    /// Start from zero; same fixed point under the smallness condition.
    Zero,
}

/// Outcome of a Picard solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub trajectory: Trajectory,
    /// Sup-sup difference per sweep.
    pub iteration_diffs: Vec<f64>,
    /// Weighted J^{-n/r} difference per sweep.
    pub weighted_diffs: Vec<f64>,
    pub g0: f64,
    /// Smaller root of L = g0 + L^2, when g0 < 1/4.
    pub lambda: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Sup-sup residual of `u - S[f] + B[u,u]`.
    pub residual: f64,
    pub existence_horizon: f64,
    pub sup_norms: Vec<f64>,
    /// [node][recorded index] Lorentz values.
    pub norm_records: Vec<Vec<f64>>,
    /// [node][threshold r] weak norms ||u(t_j)||*_{r,inf}.
    pub weak_norms: Vec<Vec<f64>>,
    /// [node][threshold r] blowup thresholds at the run horizon.
    pub thresholds: Vec<Vec<f64>>,
    /// Max sup-norm gap on the overlap of an extended run, when applicable.
    pub overlap_gap: Option<f64>,
}

/// Largest T with 4 eta_{n,r} T^{(1-n/r)/2} ||f||*_{r,inf} < 1; infinite for
/// zero data.
pub fn existence_horizon(
    f_weak_norm: f64,
    n: usize,
    r: f64,
    table: &ConstantsTable,
) -> Result<f64> {
    if !(r > n as f64) {
        return Err(Error::Subcritical { n, r });
    }
    if !(f_weak_norm >= 0.0) {
        return Err(Error::Domain(format!(
            "weak norm {f_weak_norm} must be nonnegative"
        )));
    }
    if f_weak_norm == 0.0 {
        return Ok(f64::INFINITY);
    }
    let eta = table.eta(r)?;
    let n_over_r = if r.is_infinite() { 0.0 } else { n as f64 / r };
    // (4 eta ||f||)^{-2r/(r-n)}; the exponent is -2/(1 - n/r)
    Ok((4.0 * eta * f_weak_norm).powf(-2.0 / (1.0 - n_over_r)))
}

/// Smaller root of Lambda = g0 + Lambda^2 for g0 < 1/4.
pub fn contraction_lambda(g0: f64) -> Result<f64> {
    if !(0.0..0.25).contains(&g0) {
        return Err(Error::NoContraction(g0));
    }
    Ok((1.0 - (1.0 - 4.0 * g0).sqrt()) / 2.0)
}

/// Blowup threshold 1 / (4 eta_{n,r} (T - t0)^{(1-n/r)/2}): a solution that
/// blows up at time T must exceed it in L^{r,inf} at every earlier t0.
pub fn blowup_threshold(
    n: usize,
    r: f64,
    horizon: f64,
    t0: f64,
    table: &ConstantsTable,
) -> Result<f64> {
    if !(r > n as f64) {
        return Err(Error::Subcritical { n, r });
    }
    if !(t0 > 0.0 && t0 < horizon && horizon.is_finite()) {
        return Err(Error::Domain(format!(
            "need 0 < t0 < T < inf, got t0 = {t0}, T = {horizon}"
        )));
    }
    let eta = table.eta(r)?;
    let n_over_r = if r.is_infinite() { 0.0 } else { n as f64 / r };
    Ok(1.0 / (4.0 * eta * (horizon - t0).powf(0.5 * (1.0 - n_over_r))))
}

fn weak_norm(field: &Field, r: f64) -> Result<f64> {
    let rearr = Rearrangement::from_field(field);
    if r.is_infinite() {
        Ok(rearr.max_value())
    } else {
        lorentz_value(&rearr, &LorentzIndex::weak(r)?)
    }
}

/// J^{-n/r}_{sup, inf} norm over the lattice: max_j t_j^{n/2r} sup |u(t_j)|.
fn weighted_sup_norm(traj: &Trajectory, n: usize, r: f64) -> f64 {
    let n_over_r = if r.is_infinite() { 0.0 } else { n as f64 / r };
    traj.times()
        .iter()
        .zip(traj.sup_norms())
        .map(|(&t, s)| t.powf(n_over_r / 2.0) * s)
        .fold(0.0, f64::max)
}

fn max_diff(a: &[Field], b: &[Field]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.max_abs_diff(y))
        .fold(0.0, f64::max)
}

fn weighted_max_diff(times: &[f64], a: &[Field], b: &[Field], n: usize, r: f64) -> f64 {
    let n_over_r = if r.is_infinite() { 0.0 } else { n as f64 / r };
    times
        .iter()
        .zip(a.iter().zip(b))
        .map(|(&t, (x, y))| t.powf(n_over_r / 2.0) * x.max_abs_diff(y))
        .fold(0.0, f64::max)
}

pub fn picard_solve(f: &Field, cfg: &SolveConfig, table: &ConstantsTable) -> Result<SolveReport> {
    picard_solve_seeded(f, cfg, table, PicardSeed::HeatFlow)
}

pub fn picard_solve_seeded(
    f: &Field,
    cfg: &SolveConfig,
    table: &ConstantsTable,
    seed: PicardSeed,
) -> Result<SolveReport> {
    f.expect_rank(1)?;
    let grid = f.grid();
    let n = grid.dimension();
    cfg.validate(n)?;
    if table.n != n {
        return Err(Error::Config(format!(
            "constants table is for n = {}, grid has n = {n}",
            table.n
        )));
    }
    let div = crate::spectral::divergence(f)?.sup_norm();
    if div > 1e-8 * (1.0 + f.sup_norm()) {
        return Err(Error::Domain(format!(
            "initial datum is not divergence-free: {div:.3e}"
        )));
    }

    let r = cfg.subcritical_r;
    let times = cfg.lattice();
    let base = heat_trajectory(f, &times)?;

    let n_over_r = if r.is_infinite() { 0.0 } else { n as f64 / r };
    let delta = table.delta(r)?;
    let g0 = delta * cfg.horizon.powf(0.5 * (1.0 - n_over_r)) * weighted_sup_norm(&base, n, r);
    let lambda = contraction_lambda(g0).ok();

    let f_weak = weak_norm(f, r)?;
    let horizon_bound = existence_horizon(f_weak, n, r, table)?;

    let mut current: Vec<Field> = match seed {
        PicardSeed::HeatFlow => base.fields().to_vec(),
        PicardSeed::Zero => vec![Field::zeros(grid, 1); times.len()],
    };
    let mut iteration_diffs = Vec::new();
    let mut weighted_diffs = Vec::new();
    let mut converged = false;
    let mut sweeps = 0;

    while sweeps < cfg.max_iterations {
        sweeps += 1;
        let current_traj =
            Trajectory::new(grid, times.clone(), current.clone())?.with_initial(f.clone())?;
        let b = bilinear_all(&current_traj, &current_traj)?;
        let next: Vec<Field> = base
            .fields()
            .iter()
            .zip(&b)
            .map(|(u0, bf)| u0.sub(bf))
            .collect();
        let diff = max_diff(&next, &current);
        let wdiff = weighted_max_diff(&times, &next, &current, n, r);
        iteration_diffs.push(diff);
        weighted_diffs.push(wdiff);
        current = next;
        if diff <= cfg.picard_tolerance {
            converged = true;
            break;
        }
    }

    let trajectory = Trajectory::new(grid, times.clone(), current)?.with_initial(f.clone())?;
    // fixed-point residual u - S[f] + B[u,u]
    let b = bilinear_all(&trajectory, &trajectory)?;
    let residual = trajectory
        .fields()
        .iter()
        .zip(base.fields().iter().zip(&b))
        .map(|(u, (u0, bf))| u.max_abs_diff(&u0.sub(bf)))
        .fold(0.0, f64::max);

    let sup_norms = trajectory.sup_norms();
    let mut norm_records = Vec::with_capacity(times.len());
    let mut weak_norms = Vec::with_capacity(times.len());
    let mut thresholds = Vec::with_capacity(times.len());
    for (j, field) in trajectory.fields().iter().enumerate() {
        let rearr = Rearrangement::from_field(field);
        let mut rec = Vec::with_capacity(cfg.record_indices.len());
        for idx in &cfg.record_indices {
            rec.push(lorentz_value(&rearr, idx)?);
        }
        norm_records.push(rec);
        let mut wn = Vec::with_capacity(cfg.threshold_rs.len());
        let mut th = Vec::with_capacity(cfg.threshold_rs.len());
        for &tr in &cfg.threshold_rs {
            wn.push(weak_norm(field, tr)?);
            let t_j = times[j];
            th.push(if t_j < cfg.horizon {
                blowup_threshold(n, tr, cfg.horizon, t_j, table)?
            } else {
                f64::INFINITY
            });
        }
        weak_norms.push(wn);
        thresholds.push(th);
    }

    Ok(SolveReport {
        trajectory,
        iteration_diffs,
        weighted_diffs,
        g0,
        lambda,
        converged,
        iterations: sweeps,
        residual,
        existence_horizon: horizon_bound,
        sup_norms,
        norm_records,
        weak_norms,
        thresholds,
        overlap_gap: None,
    })
}

/// Restart from u(t0) and continue for `extra_horizon`, concatenating the
/// trajectories. On any overlap with the original run the two solutions are
/// compared (uniqueness); the gap lands in `overlap_gap`.
pub fn extend(
    report: &SolveReport,
    t0: f64,
    extra_horizon: f64,
    cfg: &SolveConfig,
    table: &ConstantsTable,
) -> Result<SolveReport> {
    if extra_horizon == 0.0 {
        return Ok(report.clone());
    }
    if !(extra_horizon > 0.0) {
        return Err(Error::Domain(format!(
            "extension horizon {extra_horizon} must be nonnegative"
        )));
    }
    let traj = &report.trajectory;
    let grid = traj.grid();
    let n = grid.dimension();
    let idx = traj.node_index(t0)?;
    let snapshot = traj.field(idx).clone();

    let r = cfg.subcritical_r;
    let eta = table.eta(r)?;
    let n_over_r = if r.is_infinite() { 0.0 } else { n as f64 / r };
    let weak = weak_norm(&snapshot, r)?;
    let criterion = 4.0 * eta * extra_horizon.powf(0.5 * (1.0 - n_over_r)) * weak;
    if criterion >= 1.0 {
        return Err(Error::CannotExtend {
            threshold: 1.0 / (4.0 * eta * extra_horizon.powf(0.5 * (1.0 - n_over_r))),
            weak_norm: weak,
        });
    }

    let dt = traj.times()[0];
    let extra_nodes = (extra_horizon / dt).round() as usize;
    if extra_nodes == 0 || (extra_nodes as f64 * dt - extra_horizon).abs() > 1e-9 * extra_horizon {
        return Err(Error::Domain(format!(
            "extension horizon {extra_horizon} is not a multiple of the node spacing {dt}"
        )));
    }
    let sub_cfg = SolveConfig {
        horizon: extra_horizon,
        nodes: extra_nodes,
        ..cfg.clone()
    };
    let restart = picard_solve(&snapshot, &sub_cfg, table)?;

    // concatenate: nodes up to t0, then the restarted run shifted by t0
    let mut times = traj.times()[..=idx].to_vec();
    let mut fields = traj.fields()[..=idx].to_vec();
    let mut overlap: f64 = 0.0;
    for (k, &s) in restart.trajectory.times().iter().enumerate() {
        let t = t0 + s;
        let field = restart.trajectory.field(k).clone();
        if let Ok(orig_idx) = traj.node_index(t) {
            overlap = overlap.max(field.max_abs_diff(traj.field(orig_idx)));
        }
        if t > traj.horizon() + 1e-12 {
            times.push(t);
            fields.push(field);
        }
    }
    let combined = Trajectory::new(grid, times, fields)?.with_initial(
        traj.initial()
            .cloned()
            .unwrap_or_else(|| traj.field(0).clone()),
    )?;

    let mut out = restart;
    out.trajectory = combined;
    out.sup_norms = out.trajectory.sup_norms();
    out.overlap_gap = Some(overlap);
    Ok(out)
}

/// The lattice J^sigma path norm used by the a-priori bound checks.
pub fn weighted_path_norm(traj: &Trajectory, sigma: f64) -> f64 {
    traj.times()
        .iter()
        .zip(traj.sup_norms())
        .map(|(&t, s)| t.powf(-sigma / 2.0) * s)
        .fold(0.0, f64::max)
}

/// Criterion-implied lower bound on the remaining lifespan from the weak
/// norm at one node.
pub fn remaining_lifespan_bound(
    weak_norm_value: f64,
    n: usize,
    r: f64,
    table: &ConstantsTable,
) -> Result<f64> {
    existence_horizon(weak_norm_value, n, r, table)
}
