//! Heat and Oseen kernels evaluated from their Fourier multipliers on the
//! torus frequency lattice, with pointwise-decay, L^{p,1} and semigroup
//! certification.
//!
//! A kernel profile is the inverse transform of `(i xi)^alpha h(xi)
//! exp(-t |xi|^2)` where h = 1 for the heat tag and h_ij = delta_ij -
//! xi_i xi_j / |xi|^2 for the Oseen tag (delta_ij at xi = 0, matching the
//! Leray convention). Derivative multipliers zero the axis Nyquist plane so
//! the profile stays real; the rule is additive, which keeps the semigroup
//! identity exact on the lattice.

use std::sync::OnceLock;

use num_complex::Complex;
use rustfft::FftDirection;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid, MAX_DIMENSION};
use crate::lorentz::{lorentz_value, LorentzIndex, Rearrangement};
use crate::spectral::{fft_nd, frequency_table};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelTag {
    Heat,
    Oseen,
}

/// Kernel selector: tag plus a spatial-derivative multi-index with |alpha| <= 2.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierSpec {
    tag: KernelTag,
    derivative: Vec<usize>,
}

impl MultiplierSpec {
    pub fn new(tag: KernelTag, derivative: Vec<usize>) -> Result<Self> {
        if derivative.len() > MAX_DIMENSION {
            return Err(Error::Domain(format!(
                "derivative multi-index has {} axes",
                derivative.len()
            )));
        }
        let order: usize = derivative.iter().sum();
        if order > 2 {
            return Err(Error::Domain(format!("derivative order {order} exceeds 2")));
        }
        Ok(MultiplierSpec { tag, derivative })
    }

    pub fn heat() -> Self {
        MultiplierSpec {
            tag: KernelTag::Heat,
            derivative: Vec::new(),
        }
    }

    pub fn oseen() -> Self {
        MultiplierSpec {
            tag: KernelTag::Oseen,
            derivative: Vec::new(),
        }
    }

    /// First derivative along one axis.
    pub fn with_gradient_axis(tag: KernelTag, axis: usize) -> Result<Self> {
        let mut derivative = vec![0; axis + 1];
        derivative[axis] = 1;
        Self::new(tag, derivative)
    }

    pub fn tag(&self) -> KernelTag {
        self.tag
    }

    pub fn order(&self) -> usize {
        self.derivative.iter().sum()
    }

    pub fn derivative(&self) -> &[usize] {
        &self.derivative
    }

    /// Components of the profile: 1 for heat, n^2 for Oseen.
    pub fn component_count(&self, n: usize) -> usize {
        match self.tag {
            KernelTag::Heat => 1,
            KernelTag::Oseen => n * n,
        }
    }

    pub fn label(&self) -> String {
        let tag = match self.tag {
            KernelTag::Heat => "heat",
            KernelTag::Oseen => "oseen",
        };
        if self.order() == 0 {
            tag.to_string()
        } else {
            let alpha: Vec<String> = self.derivative.iter().map(|d| d.to_string()).collect();
            format!("{tag}_d{}", alpha.join(""))
        }
    }
}

/// Closed-form heat kernel (4 pi t)^{-n/2} exp(-|x|^2 / 4t).
pub fn heat_kernel(t: f64, x: &[f64]) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("heat kernel needs t > 0, got {t}")));
    }
    let n = x.len() as f64;
    let r2: f64 = x.iter().map(|v| v * v).sum();
    Ok((4.0 * std::f64::consts::PI * t).powf(-n / 2.0) * (-r2 / (4.0 * t)).exp())
}

/// Sampled kernel on a grid with cached aggregates.
#[derive(Debug)]
pub struct KernelProfile {
    grid: Grid,
    t: f64,
    spec: MultiplierSpec,
    components: Vec<Vec<f64>>,
    l1_norm: f64,
    accuracy_warning: bool,
    rearrangement: OnceLock<Rearrangement>,
}

impl KernelProfile {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn spec(&self) -> &MultiplierSpec {
        &self.spec
    }

    pub fn component(&self, idx: usize) -> &[f64] {
        &self.components[idx]
    }

    /// Component (i, j) of an Oseen profile.
    pub fn oseen_component(&self, i: usize, j: usize) -> &[f64] {
        &self.components[i * self.grid.dimension() + j]
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// L^1 norm of the pointwise (Frobenius) magnitude.
    pub fn l1_norm(&self) -> f64 {
        self.l1_norm
    }

    pub fn accuracy_warning(&self) -> bool {
        self.accuracy_warning
    }

    pub fn magnitude_field(&self) -> Field {
        let mut out = vec![0.0; self.grid.node_count()];
        for comp in &self.components {
            for (o, v) in out.iter_mut().zip(comp) {
                *o += v * v;
            }
        }
        for o in out.iter_mut() {
            *o = o.sqrt();
        }
        Field::from_components_unchecked(self.grid, 0, vec![out])
    }

    fn rearrangement(&self) -> &Rearrangement {
        self.rearrangement
            .get_or_init(|| Rearrangement::from_field(&self.magnitude_field()))
    }

    /// L^{p,1} quasinorm of the profile magnitude.
    pub fn lorentz_quasinorm_p1(&self, p: f64) -> Result<f64> {
        if !p.is_finite() {
            return Err(Error::Index("L^{p,1} needs p < inf".into()));
        }
        lorentz_value(self.rearrangement(), &LorentzIndex::quasinorm(p, 1.0)?)
    }
}

/// Fill the spectral multiplier for one component of a kernel.
/// `pair` is Some((i, j)) for the Oseen tag.
fn fill_multiplier(
    grid: Grid,
    t: f64,
    derivative: &[usize],
    pair: Option<(usize, usize)>,
    out: &mut [Complex<f64>],
) {
    let n = grid.dimension();
    let npts = grid.points_per_axis();
    let freq = frequency_table(grid);
    // separable Gaussian factor per axis
    let gauss: Vec<f64> = freq.iter().map(|&xi| (-t * xi * xi).exp()).collect();
    let volume = grid.box_length().powi(n as i32);
    let i_pow: Complex<f64> = match derivative.iter().sum::<usize>() % 4 {
        0 => Complex::new(1.0, 0.0),
        1 => Complex::new(0.0, 1.0),
        2 => Complex::new(-1.0, 0.0),
        _ => Complex::new(0.0, -1.0),
    };

    let mut idx = [0usize; MAX_DIMENSION];
    for (flat, slot) in out.iter_mut().enumerate() {
        let mut rem = flat;
        for axis in (0..n).rev() {
            idx[axis] = rem % npts;
            rem /= npts;
        }
        let mut weight = 1.0;
        let mut norm2 = 0.0;
        let mut zeroed = false;
        for axis in 0..n {
            let xi = freq[idx[axis]];
            norm2 += xi * xi;
            weight *= gauss[idx[axis]];
            let ord = derivative.get(axis).copied().unwrap_or(0);
            if ord > 0 {
                if grid.is_nyquist(idx[axis]) {
                    zeroed = true;
                    break;
                }
                weight *= xi.powi(ord as i32);
            }
        }
        if let Some((i, j)) = pair {
            // the odd off-diagonal projector cannot live on a Nyquist plane
            if i != j && (grid.is_nyquist(idx[i]) || grid.is_nyquist(idx[j])) {
                zeroed = true;
            }
        }
        if zeroed {
            *slot = Complex::new(0.0, 0.0);
            continue;
        }
        if let Some((i, j)) = pair {
            let projector = if norm2 == 0.0 {
                if i == j {
                    1.0
                } else {
                    0.0
                }
            } else {
                let delta = if i == j { 1.0 } else { 0.0 };
                delta - freq[idx[i]] * freq[idx[j]] / norm2
            };
            weight *= projector;
        }
        *slot = i_pow * (weight / volume);
    }
}

fn inverse_component(grid: Grid, coef: &mut [Complex<f64>]) -> Vec<f64> {
    let dims = vec![grid.points_per_axis(); grid.dimension()];
    fft_nd(coef, &dims, FftDirection::Inverse);
    coef.iter().map(|c| c.re).collect()
}

/// One kernel component streamed without materializing a full profile;
/// the large three-dimensional quadrature lattices go through here.
pub(crate) fn component_profile(
    grid: Grid,
    t: f64,
    derivative: &[usize],
    pair: Option<(usize, usize)>,
) -> Vec<f64> {
    let mut buf = vec![Complex::new(0.0, 0.0); grid.node_count()];
    fill_multiplier(grid, t, derivative, pair, &mut buf);
    inverse_component(grid, &mut buf)
}

fn check_time_and_box(t: f64, grid: Grid, strict: bool) -> Result<bool> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("kernel needs t > 0, got {t}")));
    }
    let small = grid.box_length() < 10.0 * t.sqrt();
    if small && strict {
        return Err(Error::Domain(format!(
            "box length {} below 10 sqrt(t) = {}; periodization error too large",
            grid.box_length(),
            10.0 * t.sqrt()
        )));
    }
    Ok(small)
}

/// Sample a kernel profile on the grid's frequency lattice.
pub fn kernel_grid(
    spec: &MultiplierSpec,
    t: f64,
    grid: Grid,
    strict: bool,
) -> Result<KernelProfile> {
    let warning = check_time_and_box(t, grid, strict)?;
    let n = grid.dimension();
    let mut components = Vec::with_capacity(spec.component_count(n));
    let mut buf = vec![Complex::new(0.0, 0.0); grid.node_count()];
    match spec.tag {
        KernelTag::Heat => {
            fill_multiplier(grid, t, &spec.derivative, None, &mut buf);
            components.push(inverse_component(grid, &mut buf));
        }
        KernelTag::Oseen => {
            // T_ij = T_ji: compute the upper triangle and mirror
            let mut stash: Vec<Option<Vec<f64>>> = vec![None; n * n];
            for i in 0..n {
                for j in i..n {
                    fill_multiplier(grid, t, &spec.derivative, Some((i, j)), &mut buf);
                    let vals = inverse_component(grid, &mut buf);
                    if i != j {
                        stash[j * n + i] = Some(vals.clone());
                    }
                    stash[i * n + j] = Some(vals);
                    buf.iter_mut().for_each(|c| *c = Complex::new(0.0, 0.0));
                }
            }
            components = stash.into_iter().map(|c| c.unwrap()).collect();
        }
    }
    let mut l1 = 0.0;
    for flat in 0..grid.node_count() {
        let mut s = 0.0;
        for comp in &components {
            s += comp[flat] * comp[flat];
        }
        l1 += s.sqrt();
    }
    l1 *= grid.cell_measure();
    Ok(KernelProfile {
        grid,
        t,
        spec: spec.clone(),
        components,
        l1_norm: l1,
        accuracy_warning: warning,
        rearrangement: OnceLock::new(),
    })
}

/// Measured constant of the pointwise decay bound
/// |D^a K(t,x)| <= C t^{-(n+|a|)/2} (1 + |x|/sqrt(t))^{-(n+|a|)}.
///
/// The sup runs over nodes with min-image distance at most L/4: kernels with
/// polynomial far fields saturate the bound at large |x|, and beyond that
/// radius the periodized samples no longer approximate the free-space kernel.
#[derive(Clone, Debug)]
pub struct DecayReport {
    /// sup over all sampled (t, x) of the weighted kernel magnitude.
    pub constant: f64,
    /// per-t sups, same order as the input times.
    pub per_time: Vec<f64>,
    /// (max - min) / max over the per-t sups.
    pub relative_spread: f64,
}

pub fn pointwise_decay_constant(
    spec: &MultiplierSpec,
    times: &[f64],
    grid: Grid,
    strict: bool,
) -> Result<DecayReport> {
    if times.len() < 2 {
        return Err(Error::Domain("need at least two times".into()));
    }
    let (lo, hi) = times.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), &t| {
        (lo.min(t), hi.max(t))
    });
    if hi / lo < 10.0 - 1e-9 {
        return Err(Error::Domain(format!(
            "times must span a decade, got ratio {}",
            hi / lo
        )));
    }
    let n = grid.dimension();
    let exponent = (n + spec.order()) as f64;
    let radius_cap = grid.box_length() / 4.0;
    let mut per_time = Vec::with_capacity(times.len());
    for &t in times {
        let profile = kernel_grid(spec, t, grid, strict)?;
        let mag = profile.magnitude_field();
        let mut sup: f64 = 0.0;
        for flat in 0..grid.node_count() {
            let v = mag.component(0)[flat];
            if !v.is_finite() {
                return Err(Error::NonFinite("kernel profile".into()));
            }
            let r = grid.min_image_distance(flat);
            if r > radius_cap {
                continue;
            }
            let weighted = v * t.powf(exponent / 2.0) * (1.0 + r / t.sqrt()).powf(exponent);
            sup = sup.max(weighted);
        }
        per_time.push(sup);
    }
    let max = per_time.iter().cloned().fold(0.0, f64::max);
    let min = per_time.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(DecayReport {
        constant: max,
        per_time,
        relative_spread: if max > 0.0 { (max - min) / max } else { 0.0 },
    })
}

/// L^{p,1} quasinorms of a profile with the scaling law audited at 4t on the
/// doubled box (where the lattice rescaling is exact).
#[derive(Clone, Debug)]
pub struct KernelLorentzReport {
    pub ps: Vec<f64>,
    pub values: Vec<f64>,
    /// |measured/predicted - 1| for the scaling law per p.
    pub scaling_errors: Vec<f64>,
}

pub fn kernel_lorentz_profile(
    spec: &MultiplierSpec,
    t: f64,
    grid: Grid,
    ps: &[f64],
    strict: bool,
) -> Result<KernelLorentzReport> {
    let profile = kernel_grid(spec, t, grid, strict)?;
    let doubled = Grid::with_any_resolution(
        grid.dimension(),
        grid.points_per_axis(),
        2.0 * grid.box_length(),
    )?;
    let scaled = kernel_grid(spec, 4.0 * t, doubled, strict)?;
    let n = grid.dimension() as f64;
    let mut values = Vec::with_capacity(ps.len());
    let mut scaling_errors = Vec::with_capacity(ps.len());
    for &p in ps {
        if !p.is_finite() {
            return Err(Error::Index("L^{p,1} needs p < inf".into()));
        }
        let v = profile.lorentz_quasinorm_p1(p)?;
        let v4 = scaled.lorentz_quasinorm_p1(p)?;
        // ||D^a K(4t)|| = 4^{-(|a| + n/p')/2} ||D^a K(t)||
        let conj = 1.0 - 1.0 / p;
        let predicted = v * 4.0_f64.powf(-(spec.order() as f64 + n * conj) / 2.0);
        values.push(v);
        scaling_errors.push(if predicted != 0.0 {
            (v4 / predicted - 1.0).abs()
        } else {
            0.0
        });
    }
    Ok(KernelLorentzReport {
        ps: ps.to_vec(),
        values,
        scaling_errors,
    })
}

/// Max-abs residual of the semigroup identity Phi(s) * K^a(t) = K^a(s+t),
/// with the convolution done spectrally on the torus.
pub fn semigroup_residual(
    spec: &MultiplierSpec,
    s: f64,
    t: f64,
    grid: Grid,
    strict: bool,
) -> Result<f64> {
    if !(s > 0.0) || !(t > 0.0) {
        return Err(Error::Domain(format!(
            "semigroup needs s, t > 0, got ({s}, {t})"
        )));
    }
    let n = grid.dimension();
    let volume = grid.box_length().powi(n as i32);
    let heat = MultiplierSpec::heat();
    let _ = check_time_and_box(s + t, grid, strict)?;

    let mut heat_coef = vec![Complex::new(0.0, 0.0); grid.node_count()];
    fill_multiplier(grid, s, &heat.derivative, None, &mut heat_coef);

    let pairs: Vec<Option<(usize, usize)>> = match spec.tag {
        KernelTag::Heat => vec![None],
        KernelTag::Oseen => (0..n * n).map(|c| Some((c / n, c % n))).collect(),
    };
    let mut worst: f64 = 0.0;
    let mut buf = vec![Complex::new(0.0, 0.0); grid.node_count()];
    let mut direct = vec![Complex::new(0.0, 0.0); grid.node_count()];
    for pair in pairs {
        fill_multiplier(grid, t, &spec.derivative, pair, &mut buf);
        // torus convolution of two series: coefficients multiply times L^n
        for (c, h) in buf.iter_mut().zip(&heat_coef) {
            *c *= h * volume;
        }
        let conv = inverse_component(grid, &mut buf);
        fill_multiplier(grid, s + t, &spec.derivative, pair, &mut direct);
        let target = inverse_component(grid, &mut direct);
        for (a, b) in conv.iter().zip(&target) {
            worst = worst.max((a - b).abs());
        }
        buf.iter_mut().for_each(|c| *c = Complex::new(0.0, 0.0));
        direct.iter_mut().for_each(|c| *c = Complex::new(0.0, 0.0));
    }
    Ok(worst)
}
