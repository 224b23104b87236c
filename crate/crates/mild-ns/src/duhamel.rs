//! The integral operators of the mild formulation: the heat map S, the time
//! integral A against the Oseen gradient, the bilinear map `B[u,v] = A[u (x) v]`,
//! and the J/K/L path-space norms.
//!
//! Space is handled spectrally (exact on the torus). Time uses an exact
//! exponential integrator: spectral coefficients of the integrand are taken
//! piecewise linear between nodes and each slab integral of
//! `(a + b s) exp(-(t - s) |xi|^2)` is evaluated in closed form. The apparent
//! (t-s)^{-1/2} singularity lives only in aggregated kernel norms; per mode
//! the integrand is smooth, so the scheme is unconditionally stable and
//! second order in the data.
//!
//! A trajectory may carry a snapshot at t = 0 (solver trajectories carry
//! u(0) = f). The integrand on the first slab (0, t_1) is then the linear
//! segment from that snapshot; without one it is frozen at w(t_1), which
//! keeps the s^sigma envelopes of the operator estimates valid for sigma <= 0.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid, MAX_DIMENSION};
use crate::lorentz::{lorentz_value, Exponent, LorentzIndex, Rearrangement};
use crate::spectral::{
    dealias_two_thirds, for_each_mode, forward, frequency_table, inverse, SpectralField,
};

/// Time-indexed sequence of fields on a shared grid, with an optional t = 0
/// snapshot.
#[derive(Clone, Debug)]
pub struct Trajectory {
    grid: Grid,
    times: Vec<f64>,
    fields: Vec<Field>,
    initial: Option<Field>,
}

impl Trajectory {
    pub fn new(grid: Grid, times: Vec<f64>, fields: Vec<Field>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::LatticeMismatch("empty trajectory".into()));
        }
        if times.len() != fields.len() {
            return Err(Error::LatticeMismatch(format!(
                "{} times vs {} fields",
                times.len(),
                fields.len()
            )));
        }
        let mut prev = 0.0;
        for &t in &times {
            if !(t > prev) {
                return Err(Error::LatticeMismatch(format!(
                    "times must be strictly increasing and positive, got {t} after {prev}"
                )));
            }
            prev = t;
        }
        for f in &fields {
            if f.grid() != grid {
                return Err(Error::LatticeMismatch("field on a different grid".into()));
            }
            if f.rank() != fields[0].rank() {
                return Err(Error::LatticeMismatch("mixed ranks in trajectory".into()));
            }
        }
        Ok(Trajectory {
            grid,
            times,
            fields,
            initial: None,
        })
    }

    pub fn with_initial(mut self, initial: Field) -> Result<Self> {
        if initial.grid() != self.grid || initial.rank() != self.rank() {
            return Err(Error::LatticeMismatch(
                "initial snapshot shape mismatch".into(),
            ));
        }
        self.initial = Some(initial);
        Ok(self)
    }

    /// Uniform lattice t_j = j T / J for j = 1..=J, sampled from `f(t)`.
    pub fn from_fn<F>(grid: Grid, horizon: f64, nodes: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<Field>,
    {
        let times: Vec<f64> = (1..=nodes)
            .map(|j| j as f64 * horizon / nodes as f64)
            .collect();
        let fields = times.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Trajectory::new(grid, times, fields)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn rank(&self) -> usize {
        self.fields[0].rank()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn field(&self, idx: usize) -> &Field {
        &self.fields[idx]
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn initial(&self) -> Option<&Field> {
        self.initial.as_ref()
    }

    /// Index of the node at time t (1e-9 relative tolerance).
    pub fn node_index(&self, t: f64) -> Result<usize> {
        let tol = 1e-9 * self.horizon().max(1.0);
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= tol)
            .ok_or(Error::Range(t))
    }

    /// Restart view from a node: times shift by t0 and the node value
    /// becomes the t = 0 snapshot, so piecewise-linear reconstructions agree
    /// with the unshifted trajectory.
    pub fn shift(&self, node_idx: usize) -> Result<Trajectory> {
        if node_idx + 1 >= self.len() {
            return Err(Error::Range(self.times[node_idx]));
        }
        let t0 = self.times[node_idx];
        let times = self.times[node_idx + 1..].iter().map(|&t| t - t0).collect();
        let fields = self.fields[node_idx + 1..].to_vec();
        Trajectory::new(self.grid, times, fields)?.with_initial(self.fields[node_idx].clone())
    }

    pub fn sup_norms(&self) -> Vec<f64> {
        self.fields.iter().map(|f| f.sup_norm()).collect()
    }

    /// Largest max-abs divergence across nodes, for the divergence-free tag.
    pub fn max_divergence(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for f in &self.fields {
            worst = worst.max(crate::spectral::divergence(f)?.sup_norm());
        }
        Ok(worst)
    }

    /// Per-node Lorentz values of the field magnitudes.
    pub fn node_lorentz_values(&self, idx: &LorentzIndex) -> Result<Vec<f64>> {
        self.fields
            .iter()
            .map(|f| lorentz_value(&Rearrangement::from_field(f), idx))
            .collect()
    }
}

/// Heat flow `S[f](t)`: per-mode decay `exp(-t |xi|^2)`.
pub fn apply_heat(f: &Field, t: f64) -> Result<Field> {
    if t < 0.0 {
        return Err(Error::Domain(format!("heat flow needs t >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    let grid = f.grid();
    let freq = frequency_table(grid);
    let n = grid.dimension();
    let mut sf = forward(f);
    for_each_mode(grid, |flat, idx| {
        let lambda: f64 = (0..n).map(|a| freq[idx[a]] * freq[idx[a]]).sum();
        let decay = (-t * lambda).exp();
        for c in 0..sf.component_count() {
            sf.component_mut(c)[flat] *= decay;
        }
    });
    Ok(inverse(&sf))
}

/// `S[f]` sampled on a time lattice, with f itself as the t = 0 snapshot.
pub fn heat_trajectory(f: &Field, times: &[f64]) -> Result<Trajectory> {
    let grid = f.grid();
    let freq = frequency_table(grid);
    let n = grid.dimension();
    let sf = forward(f);
    let mut fields = Vec::with_capacity(times.len());
    for &t in times {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("lattice time {t} must be positive")));
        }
        let mut scaled = sf.clone();
        for_each_mode(grid, |flat, idx| {
            let lambda: f64 = (0..n).map(|a| freq[idx[a]] * freq[idx[a]]).sum();
            let decay = (-t * lambda).exp();
            for c in 0..scaled.component_count() {
                scaled.component_mut(c)[flat] *= decay;
            }
        });
        fields.push(inverse(&scaled));
    }
    Trajectory::new(grid, times.to_vec(), fields)?.with_initial(f.clone())
}

/// Slab weights: phi0 = int_0^D exp(-(D-s) l) ds, phi1 = int_0^D s exp(-(D-s) l) ds.
fn slab_weights(lambda: f64, delta: f64) -> (f64, f64) {
    if lambda == 0.0 {
        return (delta, 0.5 * delta * delta);
    }
    let x = lambda * delta;
    let phi0 = -libm::expm1(-x) / lambda;
    let phi1 = if x < 1e-3 {
        // (x - 1 + e^{-x}) / x^2, expanded to avoid cancellation
        delta * delta * (0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0)
    } else {
        (delta - phi0) / lambda
    };
    (phi0, phi1)
}

struct SpectralTensor {
    comps: Vec<Vec<Complex<f64>>>,
}

fn tensor_spectrum(field: &Field, dealias: bool) -> SpectralTensor {
    let mut sf = forward(field);
    if dealias {
        dealias_two_thirds(&mut sf);
    }
    SpectralTensor {
        comps: (0..sf.component_count())
            .map(|c| sf.component(c).to_vec())
            .collect(),
    }
}

/// Core of A[w]: runs the exponential recurrence over slabs and returns the
/// velocity field at every requested prefix of the lattice.
fn duhamel_core(
    grid: Grid,
    times: &[f64],
    tensors: &[SpectralTensor],
    initial: Option<&SpectralTensor>,
    upto: usize,
) -> Result<Vec<Field>> {
    let n = grid.dimension();
    let freq = frequency_table(grid);
    let modes = grid.node_count();
    let nc = n * n;
    // running integrals int_0^{t_i} e^{-(t_i - s) lambda} w_hat(s) ds
    let mut acc = vec![vec![Complex::new(0.0, 0.0); modes]; nc];
    let mut out = Vec::with_capacity(upto + 1);
    let mut xi = [0.0; MAX_DIMENSION];

    for i in 0..=upto {
        let t_prev = if i == 0 { 0.0 } else { times[i - 1] };
        let delta = times[i] - t_prev;
        let mut result = SpectralField::zeros(grid, 1);
        for_each_mode(grid, |flat, idx| {
            // Nyquist planes cannot carry the odd multiplier consistently
            if (0..n).any(|a| grid.is_nyquist(idx[a])) {
                return;
            }
            let mut lambda = 0.0;
            for a in 0..n {
                xi[a] = freq[idx[a]];
                lambda += xi[a] * xi[a];
            }
            let decay = (-lambda * delta).exp();
            let (phi0, phi1) = slab_weights(lambda, delta);
            for c in 0..nc {
                let right = tensors[i].comps[c][flat];
                let left = if i == 0 {
                    match initial {
                        Some(w0) => w0.comps[c][flat],
                        None => right,
                    }
                } else {
                    tensors[i - 1].comps[c][flat]
                };
                let slope = (right - left) / delta;
                acc[c][flat] = acc[c][flat] * decay + left * phi0 + slope * phi1;
            }
            if lambda == 0.0 {
                return; // i xi_k vanishes: the zero mode contributes nothing
            }
            // contract i xi_k P_aj acc_{jk}
            for a in 0..n {
                let mut total = Complex::new(0.0, 0.0);
                for j in 0..n {
                    let p_aj = (if a == j { 1.0 } else { 0.0 }) - xi[a] * xi[j] / lambda;
                    if p_aj == 0.0 {
                        continue;
                    }
                    for k in 0..n {
                        let w_acc = acc[j * n + k][flat];
                        total += Complex::new(0.0, xi[k]) * p_aj * w_acc;
                    }
                }
                result.component_mut(a)[flat] = total;
            }
        });
        out.push(inverse(&result));
    }
    Ok(out)
}

/// `A[w]` at every node of the lattice.
pub fn duhamel_all(w: &Trajectory) -> Result<Vec<Field>> {
    w.fields[0].expect_rank(2)?;
    let tensors: Vec<SpectralTensor> = w.fields.iter().map(|f| tensor_spectrum(f, false)).collect();
    let initial = w.initial.as_ref().map(|f| tensor_spectrum(f, false));
    duhamel_core(w.grid, &w.times, &tensors, initial.as_ref(), w.len() - 1)
}

/// `A[w](t)` at one node of the lattice.
pub fn duhamel_at(w: &Trajectory, t: f64) -> Result<Field> {
    w.fields[0].expect_rank(2)?;
    let idx = w.node_index(t)?;
    let tensors: Vec<SpectralTensor> = w.fields[..=idx]
        .iter()
        .map(|f| tensor_spectrum(f, false))
        .collect();
    let initial = w.initial.as_ref().map(|f| tensor_spectrum(f, false));
    let mut fields = duhamel_core(w.grid, &w.times[..=idx], &tensors, initial.as_ref(), idx)?;
    Ok(fields.pop().unwrap())
}

/// Pointwise tensor product (u (x) v)_{jk} = u_j v_k.
pub fn tensor_product(u: &Field, v: &Field) -> Field {
    let grid = u.grid();
    let n = grid.dimension();
    let mut comps = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let prod: Vec<f64> = u
                .component(j)
                .iter()
                .zip(v.component(k))
                .map(|(a, b)| a * b)
                .collect();
            comps.push(prod);
        }
    }
    Field::from_components_unchecked(grid, 2, comps)
}

fn bilinear_tensors(
    u: &Trajectory,
    v: &Trajectory,
) -> Result<(Vec<SpectralTensor>, Option<SpectralTensor>)> {
    u.fields[0].expect_rank(1)?;
    v.fields[0].expect_rank(1)?;
    if u.grid != v.grid {
        return Err(Error::LatticeMismatch("grids differ".into()));
    }
    if u.times.len() != v.times.len()
        || u.times
            .iter()
            .zip(&v.times)
            .any(|(a, b)| (a - b).abs() > 1e-12 * a.abs().max(1.0))
    {
        return Err(Error::LatticeMismatch("time lattices differ".into()));
    }
    // u (x) v nodewise in physical space, 2/3-dealiased in spectral space
    let tensors: Vec<SpectralTensor> = u
        .fields
        .iter()
        .zip(&v.fields)
        .map(|(a, b)| tensor_spectrum(&tensor_product(a, b), true))
        .collect();
    let initial = match (&u.initial, &v.initial) {
        (Some(a), Some(b)) => Some(tensor_spectrum(&tensor_product(a, b), true)),
        _ => None,
    };
    Ok((tensors, initial))
}

/// `B[u,v]` at every node: forms u (x) v nodewise and applies A.
pub fn bilinear_all(u: &Trajectory, v: &Trajectory) -> Result<Vec<Field>> {
    let (tensors, initial) = bilinear_tensors(u, v)?;
    duhamel_core(u.grid, &u.times, &tensors, initial.as_ref(), u.len() - 1)
}

/// `B[u,v](t)` at one node.
pub fn bilinear_at(u: &Trajectory, v: &Trajectory, t: f64) -> Result<Field> {
    let idx = u.node_index(t)?;
    let (tensors, initial) = bilinear_tensors(u, v)?;
    let mut fields = duhamel_core(
        u.grid,
        &u.times[..=idx],
        &tensors[..=idx],
        initial.as_ref(),
        idx,
    )?;
    Ok(fields.pop().unwrap())
}

/// Path-space family selector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathFamily {
    /// sup_t t^{-sigma/2} ||u(t)||; the "every time" flavor.
    SupWeighted { sigma: f64 },
    /// esssup_t t^{-sigma/2} ||u(t)||; coincides with the sup flavor on a
    /// finite lattice (both reduce to a max over nodes).
    EssSupWeighted { sigma: f64 },
    /// One-dimensional Lorentz norm in time of the per-node norm series,
    /// read as a step function over the node gaps.
    TimeLorentz { alpha: Exponent, beta: Exponent },
}

#[derive(Clone, Copy, Debug)]
pub struct PathSpec {
    pub family: PathFamily,
    pub index: LorentzIndex,
}

impl PathSpec {
    pub fn new(family: PathFamily, index: LorentzIndex) -> Result<Self> {
        if let PathFamily::TimeLorentz { alpha, beta } = family {
            match alpha {
                Exponent::Finite(a) if a > 1.0 => {}
                Exponent::Infinity => {
                    if !matches!(beta, Exponent::Infinity) {
                        return Err(Error::Index("alpha = inf forces beta = inf".into()));
                    }
                }
                _ => {
                    return Err(Error::Index(
                        "time exponent alpha must lie in (1, inf]".into(),
                    ))
                }
            }
            if matches!(beta, Exponent::Supremum) {
                return Err(Error::Index("beta has no sup variant".into()));
            }
        }
        Ok(PathSpec { family, index })
    }

    pub fn sup_weighted(sigma: f64, index: LorentzIndex) -> Self {
        PathSpec {
            family: PathFamily::SupWeighted { sigma },
            index,
        }
    }
}

/// Path norm of a trajectory. Weighted families report +inf if the weight
/// overflows at the first node.
pub fn path_norm(traj: &Trajectory, spec: &PathSpec) -> Result<f64> {
    let values = traj.node_lorentz_values(&spec.index)?;
    match spec.family {
        PathFamily::SupWeighted { sigma } | PathFamily::EssSupWeighted { sigma } => {
            let mut best: f64 = 0.0;
            for (&t, &v) in traj.times.iter().zip(&values) {
                let weighted = t.powf(-sigma / 2.0) * v;
                if !weighted.is_finite() && v > 0.0 {
                    return Ok(f64::INFINITY);
                }
                best = best.max(weighted);
            }
            Ok(best)
        }
        PathFamily::TimeLorentz { alpha, beta } => {
            let mut pieces = Vec::with_capacity(values.len());
            let mut prev = 0.0;
            for (&t, &v) in traj.times.iter().zip(&values) {
                pieces.push((v, t - prev));
                prev = t;
            }
            let series = Rearrangement::from_pieces(&pieces);
            let outer = LorentzIndex::new(alpha, beta, spec.index.kind())?;
            lorentz_value(&series, &outer)
        }
    }
}
