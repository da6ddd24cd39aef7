use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform periodic grid `x_j = −X + jΔ`, `j = 0..N`, per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub half_width: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(dim: usize, half_width: f64, points: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Parameter(format!("dimension {dim} not in {{1, 2}}")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Parameter(format!("half width {half_width} must be positive")));
        }
        if !points.is_power_of_two() || points < 256 {
            return Err(Error::Parameter(format!("{points} points: need a power of two ≥ 256")));
        }
        Ok(GridSpec { dim, half_width, points })
    }

    /// `X = 32π`, `N = 4096`.
    pub fn default_1d() -> Self {
        GridSpec { dim: 1, half_width: 32.0 * PI, points: 4096 }
    }

    /// `X = 16π`, `N = 512` per axis.
    pub fn default_2d() -> Self {
        GridSpec { dim: 2, half_width: 16.0 * PI, points: 512 }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    /// `2π/(NΔ) = π/X`.
    pub fn freq_spacing(&self) -> f64 {
        PI / self.half_width
    }

    /// `Ξ = π/Δ`.
    pub fn nyquist(&self) -> f64 {
        PI / self.spacing()
    }

    pub fn coord(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.coord(j)).collect()
    }

    /// Matching angular-frequency grid; applying this twice returns `self`.
    pub fn frequency_grid(&self) -> GridSpec {
        GridSpec { dim: self.dim, half_width: self.nyquist(), points: self.points }
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `Δ^d`.
    pub fn cell(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Axis indices of a flat (row-major) index.
    pub fn unflatten(&self, idx: usize) -> [usize; 2] {
        if self.dim == 1 {
            [idx, 0]
        } else {
            [idx / self.points, idx % self.points]
        }
    }

    /// Coordinates of a flat index (second entry unused at `d = 1`).
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let [a, b] = self.unflatten(idx);
        if self.dim == 1 {
            [self.coord(a), 0.0]
        } else {
            [self.coord(a), self.coord(b)]
        }
    }

    /// Euclidean and sup norms of the point at a flat index.
    pub fn norms_at(&self, idx: usize) -> (f64, f64) {
        let [a, b] = self.point(idx);
        ((a * a + b * b).sqrt(), a.abs().max(b.abs()))
    }

    /// Whether a flat index lies in the outermost `frac` shell of the box.
    pub fn in_shell(&self, idx: usize, frac: f64) -> bool {
        let w = ((self.points as f64) * frac).ceil() as usize;
        let edge = |j: usize| j < w || j >= self.points - w;
        let [a, b] = self.unflatten(idx);
        if self.dim == 1 {
            edge(a)
        } else {
            edge(a) || edge(b)
        }
    }

    pub fn same_as(&self, other: &GridSpec) -> bool {
        self.dim == other.dim
            && self.points == other.points
            && (self.half_width - other.half_width).abs() <= 1e-12 * self.half_width
    }
}
