//! Divergence-free initial data generators.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Field, Grid, MAX_DIMENSION};
use crate::spectral::{
    dealias_cutoff, for_each_mode, forward, frequency_table, inverse, SpectralField,
};

/// Supported initial-data families.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialData {
    /// u = (-cos(kx) sin(ky), sin(kx) cos(ky)) with k = 2 pi / L; n = 2 only.
    TaylorGreen,
    /// Curl of a periodized Gaussian stream function in the (x1, x2) plane.
    GaussianVortex { amplitude: f64, width: f64 },
    /// Band-limited random field with a power-law spectrum, Leray-projected,
    /// normalized to the requested sup amplitude. Reproducible from the seed.
    RandomSolenoidal {
        seed: u64,
        spectral_slope: f64,
        amplitude: f64,
    },
}

pub fn generate(grid: Grid, spec: &InitialData) -> Result<Field> {
    match spec {
        InitialData::TaylorGreen => taylor_green(grid),
        InitialData::GaussianVortex { amplitude, width } => {
            gaussian_vortex(grid, *amplitude, *width)
        }
        InitialData::RandomSolenoidal {
            seed,
            spectral_slope,
            amplitude,
        } => random_solenoidal(grid, *seed, *spectral_slope, *amplitude),
    }
}

fn taylor_green(grid: Grid) -> Result<Field> {
    if grid.dimension() != 2 {
        return Err(Error::UnsupportedSpec(format!(
            "taylor-green requires n = 2, got n = {}",
            grid.dimension()
        )));
    }
    let kappa = 2.0 * std::f64::consts::PI / grid.box_length();
    Field::from_fn(grid, 1, |c, x| {
        if c == 0 {
            -(kappa * x[0]).cos() * (kappa * x[1]).sin()
        } else {
            (kappa * x[0]).sin() * (kappa * x[1]).cos()
        }
    })
}

/// Exact Taylor-Green mild solution e^{-2 kappa^2 t} u_0; the nonlinearity is
/// a pure gradient, so the heat flow solves the integral equation.
pub fn taylor_green_at(grid: Grid, t: f64) -> Result<Field> {
    let kappa = 2.0 * std::f64::consts::PI / grid.box_length();
    let decay = (-2.0 * kappa * kappa * t).exp();
    Ok(taylor_green(grid)?.scaled(decay))
}

fn gaussian_vortex(grid: Grid, amplitude: f64, width: f64) -> Result<Field> {
    if grid.dimension() < 2 {
        return Err(Error::UnsupportedSpec(
            "gaussian-vortex requires n >= 2".into(),
        ));
    }
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::UnsupportedSpec(format!(
            "gaussian-vortex width {width} not positive"
        )));
    }
    let half = 0.5 * grid.box_length();
    let stream = Field::from_fn(grid, 0, |_, x| {
        let mut d2 = 0.0;
        for &c in x {
            let d = c - half;
            d2 += d * d;
        }
        amplitude * (-d2 / (2.0 * width * width)).exp()
    })?;
    // u = (d2 psi, -d1 psi, 0, ...) taken spectrally, so the divergence
    // cancels exactly in spectral arithmetic.
    let sf = forward(&stream);
    let freq = frequency_table(grid);
    let n = grid.dimension();
    let mut vel = SpectralField::zeros(grid, 1);
    for_each_mode(grid, |flat, idx| {
        let coef = sf.component(0)[flat];
        if !grid.is_nyquist(idx[1]) {
            vel.component_mut(0)[flat] = Complex::new(0.0, freq[idx[1]]) * coef;
        }
        if !grid.is_nyquist(idx[0]) {
            vel.component_mut(1)[flat] = -Complex::new(0.0, freq[idx[0]]) * coef;
        }
        let _ = n;
    });
    Ok(inverse(&vel))
}

fn random_solenoidal(grid: Grid, seed: u64, spectral_slope: f64, amplitude: f64) -> Result<Field> {
    let n = grid.dimension();
    if n < 2 {
        return Err(Error::UnsupportedSpec(
            "random-solenoidal requires n >= 2".into(),
        ));
    }
    let cutoff = dealias_cutoff(grid);
    let freq = frequency_table(grid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sf = SpectralField::zeros(grid, 1);
    let npts = grid.points_per_axis();

    // Fill the lexicographically positive half-space and mirror the conjugate
    // so the field is real; iteration order fixes the reproducibility contract.
    let mut signed = [0i64; MAX_DIMENSION];
    for_each_mode(grid, |flat, idx| {
        for a in 0..n {
            signed[a] = grid.signed_mode(idx[a]);
        }
        let k = &signed[..n];
        if k.iter().all(|&c| c == 0) || k.iter().any(|&c| c.abs() > cutoff) {
            return;
        }
        let primary = k.iter().find(|&&c| c != 0).map(|&c| c > 0).unwrap_or(false);
        if !primary {
            return;
        }
        let k2: f64 = (0..n).map(|a| freq[idx[a]] * freq[idx[a]]).sum();
        let scale = k2.sqrt().powf(spectral_slope);
        // mirror flat index of -k
        let mut mirror = 0usize;
        for a in 0..n {
            let m = (npts - idx[a]) % npts;
            mirror = mirror * npts + m;
        }
        for c in 0..n {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            let z = Complex::new(re, im) * scale;
            sf.component_mut(c)[flat] = z;
            sf.component_mut(c)[mirror] = z.conj();
        }
    });

    let raw = inverse(&sf);
    let projected = crate::spectral::leray_project(&raw)?;
    let sup = projected.sup_norm();
    if sup == 0.0 || amplitude == 0.0 {
        return Ok(Field::zeros(grid, 1));
    }
    Ok(projected.scaled(amplitude / sup))
}
