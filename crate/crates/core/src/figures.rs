//! Data grids behind the standard plots: the off-diagonal density map and
//! its slice at fixed `x`, the normalized-difference map over `(x, ω)`, and
//! the suppression curves in dB.
//!
//! Grids are built here and evaluated point by point, so callers can spread
//! the points over worker threads and collect rows in grid order.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use crate::imagesum::TruncationPolicy;
use crate::spectral::{sigma_vacuum, sigma_yy, sigma_yy_diag, suppression_db};
use crate::units::{CavityGeometry, FieldPoint, FrequencyGrid, DEFAULT_GUARD};

/// Frequency of the off-diagonal map and slice, `2π c/a`.
pub const MAP_OMEGA: f64 = 2.0 * PI;
/// Distance from the first plate of the off-diagonal slice, in units of `a`.
pub const SLICE_X: f64 = 0.75;
/// Transverse half-range of the off-diagonal plots, in units of `a`.
pub const Y_HALF_RANGE: f64 = 50.0;
/// Upper end of the frequency axis of the normalized-difference plots.
pub const OMEGA_MAX: f64 = 4.0 * PI;
/// Distances from the first plate of the two suppression curves.
pub const SUPPRESSION_XS: [f64; 2] = [0.25, 0.5];

/// One density value with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub omega: f64,
    pub x: f64,
    pub y: f64,
    pub sigma: f64,
    pub err: f64,
    pub n_terms: usize,
}

/// Density normalized by its diagonal value at the same `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceRow {
    pub omega: f64,
    pub x: f64,
    pub y: f64,
    pub sigma: f64,
    pub err: f64,
    pub n_terms: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedDifferenceRow {
    pub omega: f64,
    pub x: f64,
    pub normalized_difference: f64,
    /// Truncation error carried over to the normalized scale.
    pub err: f64,
    pub n_terms: usize,
}

/// Suppression at the two [`SUPPRESSION_XS`]; `None` where the density is
/// not positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuppressionRow {
    pub omega: f64,
    pub db_x025: Option<f64>,
    pub db_x05: Option<f64>,
}

impl SuppressionRow {
    pub fn both_defined(&self) -> Option<(f64, f64, f64)> {
        Some((self.omega, self.db_x025?, self.db_x05?))
    }
}

/// `count` evenly spaced values on `[min, max]`, both ends included.
pub fn linspace(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(CasimirError::DegenerateRange {
            min,
            max,
            reason: "need min < max".into(),
        });
    }
    if count < 2 {
        return Err(CasimirError::InvalidInput(format!("grid needs at least 2 points, got {count}")));
    }
    let step = (max - min) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i == count - 1 { max } else { min + i as f64 * step })
        .collect())
}

/// Frequencies `ω_k = k·ω_max/count`, `k = 1..=count`, kept away from
/// multiples of `π` by `guard`.
pub fn frequency_axis(omega_max: f64, count: usize, guard: f64) -> Result<FrequencyGrid> {
    if count < 2 {
        return Err(CasimirError::InvalidInput(format!("grid needs at least 2 points, got {count}")));
    }
    FrequencyGrid::build(omega_max / count as f64, omega_max, count, guard)
}

/// Grid of the off-diagonal density map: `x` outer, `y` inner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapGrid {
    pub omega: f64,
    pub x_steps: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub y_steps: usize,
}

impl Default for MapGrid {
    fn default() -> Self {
        Self {
            omega: MAP_OMEGA,
            x_steps: 41,
            y_min: -Y_HALF_RANGE,
            y_max: Y_HALF_RANGE,
            y_steps: 101,
        }
    }
}

impl MapGrid {
    pub fn points(&self, geometry: &CavityGeometry) -> Result<Vec<(f64, f64)>> {
        let xs = linspace(0.0, geometry.separation(), self.x_steps)?;
        let ys = linspace(self.y_min, self.y_max, self.y_steps)?;
        Ok(xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect())
    }
}

/// Grid of the slice at fixed `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceGrid {
    pub omega: f64,
    pub x: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub y_steps: usize,
}

impl Default for SliceGrid {
    fn default() -> Self {
        Self {
            omega: MAP_OMEGA,
            x: SLICE_X,
            y_min: -Y_HALF_RANGE,
            y_max: Y_HALF_RANGE,
            y_steps: 401,
        }
    }
}

impl SliceGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        linspace(self.y_min, self.y_max, self.y_steps)
    }
}

/// Grid of the normalized-difference map: `ω` outer, `x` inner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceGrid {
    pub omega_max: f64,
    pub omega_steps: usize,
    pub x_steps: usize,
    pub guard: f64,
}

impl Default for DifferenceGrid {
    fn default() -> Self {
        Self {
            omega_max: OMEGA_MAX,
            omega_steps: 100,
            x_steps: 51,
            guard: DEFAULT_GUARD,
        }
    }
}

impl DifferenceGrid {
    pub fn points(&self, geometry: &CavityGeometry) -> Result<Vec<(f64, f64)>> {
        let omegas = frequency_axis(self.omega_max, self.omega_steps, self.guard)?;
        let xs = linspace(0.0, geometry.separation(), self.x_steps)?;
        Ok(omegas
            .points()
            .iter()
            .flat_map(|&w| xs.iter().map(move |&x| (w, x)))
            .collect())
    }
}

/// Frequency axis of the suppression curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuppressionGrid {
    pub omega_max: f64,
    pub omega_steps: usize,
    pub guard: f64,
}

impl Default for SuppressionGrid {
    fn default() -> Self {
        Self {
            omega_max: OMEGA_MAX,
            omega_steps: 400,
            guard: DEFAULT_GUARD,
        }
    }
}

impl SuppressionGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        Ok(frequency_axis(self.omega_max, self.omega_steps, self.guard)?.points().to_vec())
    }
}

pub fn density_row(
    omega: f64,
    x: f64,
    y: f64,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
) -> Result<DensityRow> {
    let point = FieldPoint::new(x, y, geometry)?;
    let s = sigma_yy(omega, &point, geometry, policy)?;
    Ok(DensityRow {
        omega,
        x,
        y,
        sigma: s.value,
        err: s.err,
        n_terms: s.terms,
    })
}

/// Diagonal density row (`y = 0`).
pub fn diagonal_row(omega: f64, x: f64, geometry: &CavityGeometry, policy: &TruncationPolicy) -> Result<DensityRow> {
    let s = sigma_yy_diag(omega, x, geometry, policy)?;
    Ok(DensityRow {
        omega,
        x,
        y: 0.0,
        sigma: s.value,
        err: s.err,
        n_terms: s.terms,
    })
}

/// Slice row; `diagonal` is `σ(ω, x, x)` for the same `ω`, `x` and policy.
pub fn slice_row(
    omega: f64,
    x: f64,
    y: f64,
    diagonal: f64,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
) -> Result<SliceRow> {
    let row = density_row(omega, x, y, geometry, policy)?;
    Ok(SliceRow {
        omega,
        x,
        y,
        sigma: row.sigma,
        err: row.err,
        n_terms: row.n_terms,
        ratio: row.sigma / diagonal,
    })
}

pub fn normalized_difference_row(
    omega: f64,
    x: f64,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
) -> Result<NormalizedDifferenceRow> {
    let s = sigma_yy_diag(omega, x, geometry, policy)?;
    let vacuum = sigma_vacuum(omega, 0.0)?;
    Ok(NormalizedDifferenceRow {
        omega,
        x,
        normalized_difference: (s.value - vacuum) / vacuum,
        err: s.err / vacuum,
        n_terms: s.terms,
    })
}

pub fn suppression_row(omega: f64, geometry: &CavityGeometry, policy: &TruncationPolicy) -> Result<SuppressionRow> {
    let a = geometry.separation();
    let quarter = suppression_db(omega, SUPPRESSION_XS[0] * a, geometry, policy)?;
    let half = suppression_db(omega, SUPPRESSION_XS[1] * a, geometry, policy)?;
    Ok(SuppressionRow {
        omega,
        db_x025: quarter.db,
        db_x05: half.db,
    })
}
