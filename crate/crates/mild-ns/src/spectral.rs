//! Spectral side of the grid: multi-dimensional FFTs, the Leray projection,
//! spectral divergence, and 2/3-rule dealiasing.
//!
//! Coefficients are Fourier-series coefficients of the periodic field, i.e.
//! `field(x_m) = sum_k coef_k exp(i xi_k . x_m)` with `xi_k = 2 pi k / L`;
//! the forward transform divides the raw DFT by N^n.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::Result;
use crate::grid::{Field, Grid, MAX_DIMENSION};

/// Complex Fourier coefficients of a real field, same component layout as
/// [`Field`].
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Grid,
    rank: usize,
    components: Vec<Vec<Complex<f64>>>,
}

impl SpectralField {
    pub fn zeros(grid: Grid, rank: usize) -> Self {
        let comps = grid.dimension().pow(rank as u32);
        SpectralField {
            grid,
            rank,
            components: vec![vec![Complex::new(0.0, 0.0); grid.node_count()]; comps],
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn component(&self, idx: usize) -> &[Complex<f64>] {
        &self.components[idx]
    }

    pub fn component_mut(&mut self, idx: usize) -> &mut [Complex<f64>] {
        &mut self.components[idx]
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Largest imaginary residue of the inverse transform relative to the
    /// sup of the field; a real-valuedness diagnostic.
    pub fn imag_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for comp in &self.components {
            let mut buf = comp.clone();
            fft_nd(&mut buf, &shape(self.grid), FftDirection::Inverse);
            for v in &buf {
                worst = worst.max(v.im.abs());
                scale = scale.max(v.re.abs());
            }
        }
        if scale > 0.0 {
            worst / scale
        } else {
            worst
        }
    }
}

fn shape(grid: Grid) -> Vec<usize> {
    vec![grid.points_per_axis(); grid.dimension()]
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    let mut planner = PLANNER
        .get_or_init(|| Mutex::new(FftPlanner::new()))
        .lock()
        .unwrap();
    match direction {
        FftDirection::Forward => planner.plan_fft_forward(len),
        FftDirection::Inverse => planner.plan_fft_inverse(len),
    }
}

struct SendPtr(*mut Complex<f64>);
unsafe impl Send for SendPtr {}
unsafe impl Sync for SendPtr {}

fn fft_axis(data: &mut [Complex<f64>], dims: &[usize], axis: usize, direction: FftDirection) {
    let len = dims[axis];
    let inner: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    let fft = plan(len, direction);
    if inner == 1 {
        data.par_chunks_mut(len).for_each_init(
            || vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()],
            |scratch, row| fft.process_with_scratch(row, scratch),
        );
        return;
    }
    // Strided rows: each (outer, inner) pair owns the disjoint index set
    // {o*len*inner + i + j*inner : j < len}, so parallel scatter is sound.
    let ptr = SendPtr(data.as_mut_ptr());
    let ptr = &ptr;
    (0..outer * inner).into_par_iter().for_each_init(
        || {
            (
                vec![Complex::new(0.0, 0.0); len],
                vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()],
            )
        },
        |(row, scratch), r| {
            let o = r / inner;
            let i = r % inner;
            let base = o * len * inner + i;
            unsafe {
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = *ptr.0.add(base + j * inner);
                }
            }
            fft.process_with_scratch(row, scratch);
            unsafe {
                for (j, slot) in row.iter().enumerate() {
                    *ptr.0.add(base + j * inner) = *slot;
                }
            }
        },
    );
}

/// In-place multi-dimensional FFT over a row-major buffer.
pub(crate) fn fft_nd(data: &mut [Complex<f64>], dims: &[usize], direction: FftDirection) {
    debug_assert_eq!(data.len(), dims.iter().product::<usize>());
    for axis in 0..dims.len() {
        fft_axis(data, dims, axis, direction);
    }
}

/// Forward transform of a real field into series coefficients.
pub fn forward(field: &Field) -> SpectralField {
    let grid = field.grid();
    let dims = shape(grid);
    let scale = 1.0 / grid.node_count() as f64;
    let components = field
        .components()
        .iter()
        .map(|comp| {
            let mut buf: Vec<Complex<f64>> = comp.iter().map(|&v| Complex::new(v, 0.0)).collect();
            fft_nd(&mut buf, &dims, FftDirection::Forward);
            for c in buf.iter_mut() {
                *c *= scale;
            }
            buf
        })
        .collect();
    SpectralField {
        grid,
        rank: field.rank(),
        components,
    }
}

/// Inverse transform back to a real field (imaginary parts are dropped; they
/// are roundoff for Hermitian-symmetric coefficients).
pub fn inverse(sf: &SpectralField) -> Field {
    let dims = shape(sf.grid);
    let components = sf
        .components
        .iter()
        .map(|comp| {
            let mut buf = comp.clone();
            fft_nd(&mut buf, &dims, FftDirection::Inverse);
            buf.iter().map(|c| c.re).collect()
        })
        .collect();
    Field::from_components_unchecked(sf.grid, sf.rank, components)
}

/// Per-axis frequency table xi(i) = 2 pi k(i) / L.
pub fn frequency_table(grid: Grid) -> Vec<f64> {
    (0..grid.points_per_axis())
        .map(|i| grid.frequency(i))
        .collect()
}

/// Visit every flat spectral index with its per-axis indices.
pub fn for_each_mode<F>(grid: Grid, mut f: F)
where
    F: FnMut(usize, &[usize]),
{
    let n = grid.dimension();
    let npts = grid.points_per_axis();
    let mut idx = [0usize; MAX_DIMENSION];
    for flat in 0..grid.node_count() {
        let mut rem = flat;
        for axis in (0..n).rev() {
            idx[axis] = rem % npts;
            rem /= npts;
        }
        f(flat, &idx[..n]);
    }
}

/// Leray projection P = I - xi xi^T / |xi|^2 applied spectrally; the zero
/// mode passes through unchanged (mean momentum is preserved). Nyquist
/// planes are zeroed: the unpaired mode cannot carry the odd off-diagonal
/// part of the projector consistently with a real field.
pub fn leray_project(field: &Field) -> Result<Field> {
    field.expect_rank(1)?;
    let grid = field.grid();
    let n = grid.dimension();
    let freq = frequency_table(grid);
    let mut sf = forward(field);
    let mut xi = [0.0; MAX_DIMENSION];
    for_each_mode(grid, |flat, idx| {
        if (0..n).any(|a| grid.is_nyquist(idx[a])) {
            for a in 0..n {
                sf.components[a][flat] = Complex::new(0.0, 0.0);
            }
            return;
        }
        let mut norm2 = 0.0;
        for a in 0..n {
            xi[a] = freq[idx[a]];
            norm2 += xi[a] * xi[a];
        }
        if norm2 == 0.0 {
            return;
        }
        let mut dot = Complex::new(0.0, 0.0);
        for a in 0..n {
            dot += xi[a] * sf.components[a][flat];
        }
        let dot = dot / norm2;
        for a in 0..n {
            let c = &mut sf.components[a][flat];
            *c -= xi[a] * dot;
        }
    });
    Ok(inverse(&sf))
}

/// Spectral divergence sum_a i xi_a u_a; Nyquist planes of the derivative
/// multiplier are zeroed to keep the output real.
pub fn divergence(field: &Field) -> Result<Field> {
    field.expect_rank(1)?;
    let grid = field.grid();
    let n = grid.dimension();
    let freq = frequency_table(grid);
    let sf = forward(field);
    let mut out = vec![Complex::new(0.0, 0.0); grid.node_count()];
    for_each_mode(grid, |flat, idx| {
        let mut acc = Complex::new(0.0, 0.0);
        for a in 0..n {
            if grid.is_nyquist(idx[a]) {
                continue;
            }
            acc += Complex::new(0.0, freq[idx[a]]) * sf.components[a][flat];
        }
        out[flat] = acc;
    });
    let spectral = SpectralField {
        grid,
        rank: 0,
        components: vec![out],
    };
    Ok(inverse(&spectral))
}

/// Largest cutoff kept by the 2/3 rule.
pub fn dealias_cutoff(grid: Grid) -> i64 {
    (grid.points_per_axis() / 3) as i64
}

/// 2/3-rule truncation: zero every mode with any |k_a| above N/3.
pub fn dealias_two_thirds(sf: &mut SpectralField) {
    let grid = sf.grid;
    let cutoff = dealias_cutoff(grid);
    let n = grid.dimension();
    let mut kill = Vec::new();
    for_each_mode(grid, |flat, idx| {
        for a in 0..n {
            if grid.signed_mode(idx[a]).abs() > cutoff {
                kill.push(flat);
                break;
            }
        }
    });
    for comp in sf.components.iter_mut() {
        for &flat in &kill {
            comp[flat] = Complex::new(0.0, 0.0);
        }
    }
}
