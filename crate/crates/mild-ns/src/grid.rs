//! Periodic box discretization and sampled fields.
//!
//! The box [0, L)^n with N points per axis stands in for R^n; every integral
//! downstream is a box integral with measure h^n, h = L/N. Fields are real in
//! physical space and carry one flat sample vector per tensor component.

use crate::error::{Error, Result};

pub const MAX_DIMENSION: usize = 4;

/// Periodic grid: dimension n, points per axis N, box side L.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    dimension: usize,
    points_per_axis: usize,
    box_length: f64,
}

impl Grid {
    /// Standard grid; N must be a power of two (and at least 4).
    pub fn new(dimension: usize, points_per_axis: usize, box_length: f64) -> Result<Self> {
        if !points_per_axis.is_power_of_two() {
            return Err(Error::Grid(format!(
                "points_per_axis {points_per_axis} is not a power of two"
            )));
        }
        Self::with_any_resolution(dimension, points_per_axis, box_length)
    }

    /// Grid with arbitrary (even) resolution; used by the kernel quadrature
    /// lattices, where the reference resolutions are not powers of two.
    pub fn with_any_resolution(
        dimension: usize,
        points_per_axis: usize,
        box_length: f64,
    ) -> Result<Self> {
        if dimension == 0 || dimension > MAX_DIMENSION {
            return Err(Error::Grid(format!(
                "dimension {dimension} outside 1..={MAX_DIMENSION}"
            )));
        }
        if points_per_axis < 4 {
            return Err(Error::Grid(format!(
                "points_per_axis {points_per_axis} < 4"
            )));
        }
        if !points_per_axis.is_multiple_of(2) {
            return Err(Error::Grid(format!(
                "points_per_axis {points_per_axis} is odd"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::Grid(format!("box_length {box_length} not positive")));
        }
        Ok(Grid {
            dimension,
            points_per_axis,
            box_length,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Node spacing h = L/N.
    pub fn spacing(&self) -> f64 {
        self.box_length / self.points_per_axis as f64
    }

    /// Cell measure h^n.
    pub fn cell_measure(&self) -> f64 {
        self.spacing().powi(self.dimension as i32)
    }

    /// Total number of nodes N^n.
    pub fn node_count(&self) -> usize {
        self.points_per_axis.pow(self.dimension as u32)
    }

    /// Signed integer wavevector for a per-axis index, in [-N/2, N/2).
    pub fn signed_mode(&self, axis_index: usize) -> i64 {
        let n = self.points_per_axis as i64;
        let i = axis_index as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Physical frequency xi = 2 pi k / L for a per-axis index.
    pub fn frequency(&self, axis_index: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.signed_mode(axis_index) as f64 / self.box_length
    }

    /// The unpaired mode k = -N/2.
    pub fn is_nyquist(&self, axis_index: usize) -> bool {
        axis_index == self.points_per_axis / 2
    }

    /// Decode a flat row-major node index into per-axis indices.
    pub fn decode(&self, mut flat: usize, out: &mut [usize]) {
        debug_assert_eq!(out.len(), self.dimension);
        for axis in (0..self.dimension).rev() {
            out[axis] = flat % self.points_per_axis;
            flat /= self.points_per_axis;
        }
    }

    /// Physical coordinates of a flat node index.
    pub fn coords(&self, flat: usize, out: &mut [f64]) {
        let mut idx = [0usize; MAX_DIMENSION];
        self.decode(flat, &mut idx[..self.dimension]);
        let h = self.spacing();
        for axis in 0..self.dimension {
            out[axis] = idx[axis] as f64 * h;
        }
    }

    /// Distance from a node to the origin in the periodic (minimum image) metric.
    pub fn min_image_distance(&self, flat: usize) -> f64 {
        let mut coords = [0.0; MAX_DIMENSION];
        self.coords(flat, &mut coords);
        let half = 0.5 * self.box_length;
        let mut d2 = 0.0;
        for &c in &coords[..self.dimension] {
            let w = if c > half { self.box_length - c } else { c };
            d2 += w * w;
        }
        d2.sqrt()
    }
}

/// Sampled tensor field on a [`Grid`]: rank 0 scalar, rank 1 vector (n
/// components), rank 2 tensor (n*n components, row-major (i,j)).
#[derive(Clone, Debug)]
pub struct Field {
    grid: Grid,
    rank: usize,
    components: Vec<Vec<f64>>,
}

impl Field {
    pub fn zeros(grid: Grid, rank: usize) -> Self {
        let comps = grid.dimension().pow(rank as u32);
        Field {
            grid,
            rank,
            components: vec![vec![0.0; grid.node_count()]; comps],
        }
    }

    /// Build from explicit per-component sample vectors, validating shape and
    /// finiteness.
    pub fn from_components(grid: Grid, rank: usize, components: Vec<Vec<f64>>) -> Result<Self> {
        let expected = grid.dimension().pow(rank as u32);
        if components.len() != expected {
            return Err(Error::Rank {
                expected,
                got: components.len(),
            });
        }
        for comp in &components {
            if comp.len() != grid.node_count() {
                return Err(Error::Grid(format!(
                    "component has {} samples, grid has {} nodes",
                    comp.len(),
                    grid.node_count()
                )));
            }
            if comp.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("field sample".into()));
            }
        }
        Ok(Field {
            grid,
            rank,
            components,
        })
    }

    /// Internal constructor for outputs already known to be well-shaped.
    pub(crate) fn from_components_unchecked(
        grid: Grid,
        rank: usize,
        components: Vec<Vec<f64>>,
    ) -> Self {
        Field {
            grid,
            rank,
            components,
        }
    }

    /// Sample `f(component, point)` at every node.
    pub fn from_fn<F>(grid: Grid, rank: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, &[f64]) -> f64,
    {
        let comps = grid.dimension().pow(rank as u32);
        let mut components = Vec::with_capacity(comps);
        let mut point = [0.0; MAX_DIMENSION];
        for c in 0..comps {
            let mut values = Vec::with_capacity(grid.node_count());
            for flat in 0..grid.node_count() {
                grid.coords(flat, &mut point);
                values.push(f(c, &point[..grid.dimension()]));
            }
            components.push(values);
        }
        Field::from_components(grid, rank, components)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, idx: usize) -> &[f64] {
        &self.components[idx]
    }

    pub fn component_mut(&mut self, idx: usize) -> &mut [f64] {
        &mut self.components[idx]
    }

    pub(crate) fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn expect_rank(&self, rank: usize) -> Result<()> {
        if self.rank != rank {
            return Err(Error::Rank {
                expected: rank,
                got: self.rank,
            });
        }
        Ok(())
    }

    /// Pointwise Euclidean magnitude (abs / vector norm / Frobenius norm),
    /// returned as a scalar field.
    pub fn magnitude(&self) -> Field {
        if self.rank == 0 {
            let values = self.components[0].iter().map(|v| v.abs()).collect();
            return Field::from_components_unchecked(self.grid, 0, vec![values]);
        }
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

    /// Sup of the pointwise magnitude.
    pub fn sup_norm(&self) -> f64 {
        if self.rank == 0 {
            return self.components[0].iter().fold(0.0, |m, v| m.max(v.abs()));
        }
        let mut sup: f64 = 0.0;
        for flat in 0..self.grid.node_count() {
            let mut s = 0.0;
            for comp in &self.components {
                s += comp[flat] * comp[flat];
            }
            sup = sup.max(s);
        }
        sup.sqrt()
    }

    /// Discrete L^2 norm (cell measure included).
    pub fn l2_norm(&self) -> f64 {
        let mut s = 0.0;
        for comp in &self.components {
            for v in comp {
                s += v * v;
            }
        }
        (s * self.grid.cell_measure()).sqrt()
    }

    /// Discrete L^p norm of the pointwise magnitude.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let mag = self.magnitude();
        let s: f64 = mag.component(0).iter().map(|v| v.powf(p)).sum();
        (s * self.grid.cell_measure()).powf(1.0 / p)
    }

    pub fn scaled(&self, factor: f64) -> Field {
        let components = self
            .components
            .iter()
            .map(|c| c.iter().map(|v| v * factor).collect())
            .collect();
        Field::from_components_unchecked(self.grid, self.rank, components)
    }

    pub fn add(&self, other: &Field) -> Field {
        self.combined(other, 1.0)
    }

    pub fn sub(&self, other: &Field) -> Field {
        self.combined(other, -1.0)
    }

    fn combined(&self, other: &Field, sign: f64) -> Field {
        assert_eq!(self.rank, other.rank);
        assert_eq!(self.grid, other.grid);
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + sign * y).collect())
            .collect();
        Field::from_components_unchecked(self.grid, self.rank, components)
    }

    /// Max-abs difference over all components and nodes.
    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}
