//! Independent check of the spectral densities: the closed-form two-point
//! function is continued to complex time `s − iε`, Fourier transformed by
//! direct quadrature, and the regulator is extrapolated away.
//!
//! `σ(ω) = (1/2π) ∫ ds e^{iωs} G(s − iε)`, `ε → 0⁺`.
//!
//! `G` is even and real on the real axis, so only `[0, S]` is integrated and
//! twice the real part is kept. The cut `S` is placed in the middle of the
//! widest gap between image light cones near `s_max`; a cut right at a cone
//! costs several percent of accuracy. Images whose cones lie far beyond the
//! cut are dropped: they add a smooth `O(1/S³)` background only.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, CasimirError, Result};
use crate::imagesum::{image_distances, ImageTerms, TruncationPolicy};
use crate::spectral::{sigma_vacuum, sigma_yy};
use crate::units::{CavityGeometry, FieldPoint};

/// Extra images kept beyond those whose cones fall inside the window.
const IMAGE_MARGIN: i64 = 16;

/// Trapezoid steps per unit of the regulator.
const STEPS_PER_EPSILON: f64 = 8.0;

/// Floor on `|sin(ωa)|` in the tail estimate.
const MIN_PHASE_STEP: f64 = 1e-3;

/// Relative size of the estimated tail contribution that is tolerated.
pub const TAIL_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Regulator values in units of `a/c`, strictly decreasing.
    pub eps_schedule: Vec<f64>,
    /// Integration cutoff in units of `a/c`.
    pub s_max: f64,
    /// Minimum trapezoid samples per period of `e^{iωs}`.
    pub samples_per_oscillation: usize,
    pub terms: ImageTerms,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            eps_schedule: vec![0.05, 0.025, 0.0125],
            s_max: 200.0,
            samples_per_oscillation: 16,
            terms: ImageTerms::All,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.eps_schedule.is_empty() {
            return Err(CasimirError::InvalidInput("empty regulator schedule".into()));
        }
        for &e in &self.eps_schedule {
            if !(e.is_finite() && e > 0.0) {
                return Err(CasimirError::InvalidInput(format!("regulator {e} must be positive")));
            }
        }
        if self.eps_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(CasimirError::InvalidInput("regulator schedule must be strictly decreasing".into()));
        }
        if !(self.s_max.is_finite() && self.s_max > 0.0) {
            return Err(CasimirError::InvalidInput("s_max must be positive".into()));
        }
        if self.samples_per_oscillation < 8 {
            return Err(CasimirError::InvalidInput("need at least 8 samples per oscillation".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleEstimate {
    /// Extrapolated `ε → 0` density.
    pub value: f64,
    /// Raw estimate per regulator value.
    pub raw: Vec<f64>,
    /// Estimated contribution beyond the cut, at the smallest regulator.
    pub tail: f64,
    /// Actual cut used.
    pub cut: f64,
    /// Largest `|n|` included.
    pub images: usize,
}

fn light_cones(point: &FieldPoint, geometry: &CavityGeometry, n_max: i64, terms: ImageTerms) -> Vec<f64> {
    let mut cones = Vec::new();
    if terms == ImageTerms::FreeSpace {
        cones.push(point.y.abs());
        return cones;
    }
    for n in -n_max..=n_max {
        let d = image_distances(n, point, geometry);
        cones.push(d.a);
        cones.push(d.b);
    }
    cones
}

/// Midpoint of the widest gap between cones in `[target − L, target + L]`.
fn gap_cut(cones: &[f64], target: f64, period: f64) -> f64 {
    let mut nearby: Vec<f64> = cones
        .iter()
        .copied()
        .filter(|&c| (c - target).abs() <= period)
        .collect();
    nearby.push(target - period);
    nearby.push(target + period);
    nearby.sort_by(f64::total_cmp);
    let mut best = (0.0, target);
    for w in nearby.windows(2) {
        let gap = w[1] - w[0];
        if gap > best.0 {
            best = (gap, 0.5 * (w[0] + w[1]));
        }
    }
    best.1
}

/// `G(s)` at complex `s`, for the images `|n| ≤ n_max`.
fn two_point_complex(s: Complex64, y2: f64, distances: &[(f64, f64)], free_only: bool) -> Complex64 {
    let z = s * s;
    let shifted = z - 2.0 * y2;
    let cube_inverse = |d: Complex64| {
        let inv = d.inv();
        inv * inv * inv
    };
    let mut total = Complex64::new(0.0, 0.0);
    for (i, &(a_sq, b_sq)) in distances.iter().enumerate() {
        total += (shifted + a_sq) * cube_inverse(z - a_sq);
        if free_only {
            debug_assert_eq!(i, 0);
            break;
        }
        total -= (shifted + b_sq) * cube_inverse(z - b_sq);
    }
    total / (PI * PI)
}

/// Polynomial extrapolation of `values(eps)` to `eps = 0` (Neville).
fn extrapolate_to_zero(eps: &[f64], values: &[f64]) -> f64 {
    let mut p = values.to_vec();
    let n = p.len();
    for level in 1..n {
        for i in 0..n - level {
            let (ei, ej) = (eps[i], eps[i + level]);
            p[i] = (ej * p[i] - ei * p[i + 1]) / (ej - ei);
        }
    }
    p[0]
}

/// Spectral density at `(x, 0, 0)`, `(x, y, 0)` by numerical Fourier transform.
pub fn sigma_via_numeric_ft(
    omega: f64,
    point: &FieldPoint,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
    config: &OracleConfig,
) -> Result<OracleEstimate> {
    let omega = ensure_finite(omega, "omega")?;
    if omega <= 0.0 {
        return Err(CasimirError::InvalidInput("frequency must be positive".into()));
    }
    point.validate(geometry)?;
    config.validate()?;

    let a = geometry.separation();
    let period = geometry.period();
    let s_max = config.s_max * a;
    let window_images = (s_max / period).ceil() as i64 + IMAGE_MARGIN;
    let n_max = (policy.terms as i64).min(window_images);
    let free_only = config.terms == ImageTerms::FreeSpace;

    let cones = light_cones(point, geometry, n_max, config.terms);
    let cut = gap_cut(&cones, s_max, period);
    let tail_start = gap_cut(&cones, cut - period, period);

    let distances: Vec<(f64, f64)> = if free_only {
        let d = image_distances(0, point, geometry);
        vec![(d.a_sq, d.b_sq)]
    } else {
        (-n_max..=n_max)
            .map(|n| {
                let d = image_distances(n, point, geometry);
                (d.a_sq, d.b_sq)
            })
            .collect()
    };
    let y2 = point.y * point.y;

    let mut raw = Vec::with_capacity(config.eps_schedule.len());
    let mut tail = 0.0;
    for &eps_rel in &config.eps_schedule {
        let eps = eps_rel * a;
        let step = (eps / STEPS_PER_EPSILON).min(2.0 * PI / (config.samples_per_oscillation as f64 * omega));
        let count = (cut / step).ceil() as usize;
        let h = cut / count as f64;
        let tail_index = (tail_start / h).round() as usize;

        let mut total = 0.0;
        let mut before_tail = 0.0;
        for i in 0..=count {
            let s = i as f64 * h;
            let g = two_point_complex(Complex64::new(s, -eps), y2, &distances, free_only);
            let phase = Complex64::from_polar(1.0, omega * s);
            let f = (phase * g).re;
            let weight = if i == 0 || i == count { 0.5 } else { 1.0 };
            total += weight * f;
            if i == tail_index {
                before_tail = total - 0.5 * f;
            }
        }
        // (1/2π)·2·Re ∫₀^S
        let scale = h / PI;
        raw.push(total * scale);
        // Cone phases advance by ωL per period, so the remainder of the
        // oscillating tail is about the last period over |1 − e^{iωL}|.
        let last_period = (total - before_tail) * scale;
        let damping = 2.0 * (omega * a).sin().abs().max(MIN_PHASE_STEP);
        tail = last_period / damping;
    }

    let value = if raw.len() >= 3 {
        let k = raw.len();
        let d1 = raw[k - 2] - raw[k - 3];
        let d2 = raw[k - 1] - raw[k - 2];
        let same_direction = d1 == 0.0 || d2 == 0.0 || d1.signum() == d2.signum();
        if !same_direction || d2.abs() > d1.abs() {
            return Err(CasimirError::ExtrapolationDivergence { estimates: raw });
        }
        extrapolate_to_zero(&config.eps_schedule, &raw)
    } else {
        extrapolate_to_zero(&config.eps_schedule, &raw)
    };

    let scale = value.abs().max(sigma_vacuum(omega, 0.0)?);
    if tail.abs() > TAIL_TOLERANCE * scale {
        return Err(CasimirError::TailTooLarge { tail, scale });
    }

    Ok(OracleEstimate {
        value,
        raw,
        tail,
        cut,
        images: n_max as usize,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub terms: usize,
    pub value: f64,
    pub err: f64,
    /// Change from the previous row.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Whether `|delta|` shrinks from row to row.
    pub monotone: bool,
}

/// `σ(ω, x, y)` at each cutoff in `term_counts` with pairwise accumulation.
pub fn convergence_report(
    omega: f64,
    point: &FieldPoint,
    geometry: &CavityGeometry,
    term_counts: &[usize],
) -> Result<ConvergenceReport> {
    if term_counts.is_empty() {
        return Err(CasimirError::InvalidInput("empty list of cutoffs".into()));
    }
    if term_counts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CasimirError::InvalidInput("cutoffs must be increasing".into()));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(term_counts.len());
    for &terms in term_counts {
        let sample = sigma_yy(omega, point, geometry, &TruncationPolicy::new(terms))?;
        let delta = rows.last().map(|prev| sample.value - prev.value);
        rows.push(ConvergenceRow {
            terms,
            value: sample.value,
            err: sample.err,
            delta,
        });
    }
    let deltas: Vec<f64> = rows.iter().filter_map(|r| r.delta).map(f64::abs).collect();
    let monotone = deltas.windows(2).all(|w| w[1] <= w[0]);
    Ok(ConvergenceReport { rows, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{q_kernel, sigma_yy_diag};

    fn g() -> CavityGeometry {
        CavityGeometry::unit()
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::default().validate().is_ok());
        let bad = OracleConfig {
            eps_schedule: vec![0.01, 0.02],
            ..OracleConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = OracleConfig {
            samples_per_oscillation: 4,
            ..OracleConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn neville_reproduces_quadratics() {
        let eps = [0.4, 0.2, 0.1];
        let vals: Vec<f64> = eps.iter().map(|e| 3.0 - 2.0 * e + 5.0 * e * e).collect();
        assert!((extrapolate_to_zero(&eps, &vals) - 3.0).abs() < 1e-13);
    }

    #[test]
    fn gap_cut_avoids_cones() {
        let cones = [198.0, 198.5, 200.0, 200.5, 202.0];
        let cut = gap_cut(&cones, 200.0, 2.0);
        // two equal gaps: the first wins
        assert_eq!(cut, 199.25);
    }

    #[test]
    fn vacuum_calibration() {
        let w = 2.0 * PI;
        let p = FieldPoint::new(0.5, 0.3, &g()).unwrap();
        let config = OracleConfig {
            terms: ImageTerms::FreeSpace,
            ..OracleConfig::default()
        };
        let est = sigma_via_numeric_ft(w, &p, &g(), &TruncationPolicy::default(), &config).unwrap();
        let exact = sigma_vacuum(w, 0.3).unwrap();
        assert!((est.value - exact).abs() < 0.01 * exact.abs(), "{} vs {exact}", est.value);
    }

    #[test]
    fn convergence_examples() {
        let p = FieldPoint::new(0.0, 0.0, &g()).unwrap();
        let r = convergence_report(2.0 * PI, &p, &g(), &[1, 10, 100]).unwrap();
        assert!(r.rows.iter().all(|row| row.value == 0.0));

        let (w, x) = (2.0 * PI, 0.25);
        let p = FieldPoint::new(x, 0.0, &g()).unwrap();
        let r = convergence_report(w, &p, &g(), &[0]).unwrap();
        let expected = w.powi(3) / (4.0 * PI * PI) * (2.0 / 3.0 - q_kernel(2.0 * w * x));
        assert!((r.rows[0].value - expected).abs() < 1e-13 * expected.abs());

        assert!(convergence_report(w, &p, &g(), &[]).is_err());
        assert!(convergence_report(w, &p, &g(), &[10, 5]).is_err());
    }

    #[test]
    fn convergence_differences_shrink() {
        let p = FieldPoint::new(0.25, 0.0, &g()).unwrap();
        let r = convergence_report(2.0 * PI, &p, &g(), &[100, 1000, 10_000]).unwrap();
        assert!(r.monotone, "{:?}", r.rows);
        let direct = sigma_yy_diag(2.0 * PI, 0.25, &g(), &TruncationPolicy::new(1000)).unwrap();
        assert_eq!(r.rows[1].value, direct.value);
    }
}
