use serde::{Deserialize, Serialize};

use crate::signal::GridSpec;
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldKind {
    #[serde(rename = "STFT")]
    Stft,
    Wigner,
    Ambiguity,
}

/// Samples on a product `(x, ξ)` grid, `x`-major: `samples[ix * n_xi + ik]`.
#[derive(Clone, Debug)]
pub struct TimeFreqField {
    pub x_grid: GridSpec,
    pub xi_grid: GridSpec,
    pub samples: Vec<C64>,
    pub kind: FieldKind,
}

impl TimeFreqField {
    pub fn new(x_grid: GridSpec, xi_grid: GridSpec, samples: Vec<C64>, kind: FieldKind) -> Result<Self> {
        if x_grid.dim != 1 || xi_grid.dim != 1 {
            return Err(Error::Unsupported("time-frequency fields are implemented for d = 1".into()));
        }
        if samples.len() != x_grid.points * xi_grid.points {
            return Err(Error::GridMismatch("field size differs from grid product".into()));
        }
        Ok(TimeFreqField { x_grid, xi_grid, samples, kind })
    }

    pub fn nx(&self) -> usize {
        self.x_grid.points
    }

    pub fn nxi(&self) -> usize {
        self.xi_grid.points
    }

    pub fn get(&self, ix: usize, ik: usize) -> C64 {
        self.samples[ix * self.nxi() + ik]
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|Im|` relative to the largest modulus.
    pub fn relative_imaginary(&self) -> f64 {
        let m = self.max_abs();
        if m == 0.0 {
            return 0.0;
        }
        self.samples.iter().map(|z| z.im.abs()).fold(0.0, f64::max) / m
    }

    /// `ln|F|` per sample (`-∞` for zeros); rejects non-finite samples.
    pub fn log_magnitudes(&self) -> Result<Vec<f64>> {
        self.samples
            .iter()
            .map(|z| {
                if !z.re.is_finite() || !z.im.is_finite() {
                    Err(Error::Data("non-finite field sample".into()))
                } else {
                    Ok(z.norm().ln())
                }
            })
            .collect()
    }

    /// Value at grid coordinates `(x, ξ)` if both lie on the grids (periodic in `x`).
    pub fn value_at(&self, x: f64, xi: f64) -> Option<C64> {
        let ix = grid_index(&self.x_grid, x, true)?;
        let ik = grid_index(&self.xi_grid, xi, false)?;
        Some(self.get(ix, ik))
    }
}

/// Index of `c` on a 1-D grid, optionally reduced modulo the period `2X`.
pub fn grid_index(g: &GridSpec, c: f64, periodic: bool) -> Option<usize> {
    let h = g.spacing();
    let t = (c + g.half_width) / h;
    let r = t.round();
    if (t - r).abs() > 1e-6 {
        return None;
    }
    let n = g.points as i64;
    let i = r as i64;
    if periodic {
        Some(i.rem_euclid(n) as usize)
    } else if (0..n).contains(&i) {
        Some(i as usize)
    } else {
        None
    }
}
