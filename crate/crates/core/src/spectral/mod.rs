//! Ground-state spectral densities of `E_y` between the plates.
//!
//! With `A`, `B` the image distances of [`crate::imagesum`],
//!
//! `σ(ω, x, y) = (ω³/4π²) Σₙ { [Q(ωA) − Q(ωB)] + y² [W(ωB)/B² − W(ωA)/A²] }`
//!
//! and on the diagonal (`y = 0`) `σ(ω, x) = (ω³/4π²) Σₙ [Q(ω|nL|) − Q(ω|2x − nL|)]`.
//! The free-space density is `σ⁰(ω, y) = (ω³/2π²)[sin(ωy)/(ωy)³ − cos(ωy)/(ωy)²]`,
//! which equals `ω³/6π²` at `y = 0`.
//!
//! Normalization: the two-point function is `∫ dω σ(ω) e^{−iωt}`.

pub mod kernels;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use kernels::{free_space_shape, q_kernel, q_minus_rw, w_kernel};

use crate::error::{ensure_finite, CasimirError, Result};
use crate::imagesum::{image_distances, ImageDistances, ImageTerms, TruncationPolicy, ACCELERATION_WINDOW};
use crate::units::{CavityGeometry, FieldPoint};

/// One density evaluation with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSample {
    pub omega: f64,
    pub value: f64,
    /// Estimated bound on the truncation error of `value`.
    pub err: f64,
    /// Symmetric cutoff `N` used.
    pub terms: usize,
}

/// Ratio of the cavity density to the free-space density, in dB where the
/// ratio is positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuppressionValue {
    pub ratio: f64,
    pub db: Option<f64>,
}

impl SuppressionValue {
    pub fn from_ratio(ratio: f64) -> Self {
        let db = (ratio > 0.0 && ratio.is_finite()).then(|| 10.0 * ratio.log10());
        Self { ratio, db }
    }
}

fn check_omega(omega: f64) -> Result<f64> {
    let omega = ensure_finite(omega, "omega")?;
    if omega <= 0.0 {
        return Err(CasimirError::InvalidInput(format!(
            "frequency must be positive, got {omega}"
        )));
    }
    Ok(omega)
}

fn prefactor(omega: f64) -> f64 {
    omega * omega * omega / (4.0 * PI * PI)
}

/// Sum of `term(n)` for `|n| ≤ N` in the policy's order; `pair(k)` must
/// equal `term(k) + term(−k)`. With acceleration, the result is the mean of
/// the last few symmetric partial sums `term(0) + Σ_{j ≤ k} pair(j)`.
fn image_series<P, T>(policy: &TruncationPolicy, mut pair: P, mut term: T) -> f64
where
    P: FnMut(i64) -> f64,
    T: FnMut(i64) -> f64,
{
    let n = policy.terms as i64;
    if policy.accelerate {
        let window = (ACCELERATION_WINDOW as i64).min(n + 1);
        let first = n + 1 - window;
        let zero = term(0);
        let mut running = 0.0;
        let mut acc = 0.0;
        for k in 0..=n {
            if k > 0 {
                running += pair(k);
            }
            if k >= first {
                acc += running + zero;
            }
        }
        acc / window as f64
    } else if policy.pair_symmetric {
        let mut total = 0.0;
        for k in 1..=n {
            total += pair(k);
        }
        total + term(0)
    } else {
        let mut total = 0.0;
        for k in -n..=n {
            total += term(k);
        }
        total
    }
}

/// Tail estimate from the `1/u` envelopes of the last pair's terms. The
/// pair phases advance by `ωL` per image, so the remaining sum is bounded
/// by the last amplitude over `|sin(ωa)|` (summation by parts); near the
/// jumps at `ωa = kπ` the denominator is floored at `1/N`.
fn tail_estimate(omega: f64, geometry: &CavityGeometry, terms: usize, last_pair_envelope: f64) -> f64 {
    if terms == 0 {
        return 4.0 * prefactor(omega);
    }
    let floor = 1.0 / terms as f64;
    let den = (omega * geometry.separation()).sin().abs().max(floor);
    prefactor(omega) * 2.0 * last_pair_envelope / den
}

/// Diagonal density `σ(ω, x, x)`.
pub fn sigma_yy_diag(
    omega: f64,
    x: f64,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
) -> Result<SpectralSample> {
    let omega = check_omega(omega)?;
    let point = FieldPoint::new(x, 0.0, geometry)?;
    let period = geometry.period();
    let two_x = 2.0 * point.x;

    let term = |n: i64| {
        let nl = n as f64 * period;
        q_kernel(omega * nl.abs()) - q_kernel(omega * (two_x - nl).abs())
    };
    let sum = image_series(policy, |k| term(k) + term(-k), term);

    let last = policy.terms.max(1) as f64 * period;
    let envelope = 2.0 * kernels::q_envelope(omega * last)
        + kernels::q_envelope(omega * (two_x - last).abs())
        + kernels::q_envelope(omega * (two_x + last));

    Ok(SpectralSample {
        omega,
        value: prefactor(omega) * sum,
        err: tail_estimate(omega, geometry, policy.terms, envelope),
        terms: policy.terms,
    })
}

fn image_term(omega: f64, y2: f64, dist: f64, dist_sq: f64) -> f64 {
    // y²/A² → 0 as A → 0 (only at n = 0, y = 0, where W(0) = 0 anyway)
    let r = if dist_sq == 0.0 { 0.0 } else { y2 / dist_sq };
    q_minus_rw(omega * dist, r)
}

fn image_envelope(omega: f64, y2: f64, d: &ImageDistances) -> f64 {
    let part = |dist: f64, dist_sq: f64| {
        let r = if dist_sq == 0.0 { 0.0 } else { y2 / dist_sq };
        kernels::q_envelope(omega * dist) + r * kernels::w_envelope(omega * dist)
    };
    part(d.a, d.a_sq) + part(d.b, d.b_sq)
}

/// Density `σ(ω, x, y)` between `(x, 0, 0)` and `(x, y, 0)`.
pub fn sigma_yy(
    omega: f64,
    point: &FieldPoint,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
) -> Result<SpectralSample> {
    sigma_yy_terms(omega, point, geometry, policy, ImageTerms::All)
}

pub fn sigma_yy_terms(
    omega: f64,
    point: &FieldPoint,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
    terms: ImageTerms,
) -> Result<SpectralSample> {
    let omega = check_omega(omega)?;
    point.validate(geometry)?;
    let y2 = point.y * point.y;

    if terms == ImageTerms::FreeSpace {
        let d = image_distances(0, point, geometry);
        return Ok(SpectralSample {
            omega,
            value: prefactor(omega) * image_term(omega, y2, d.a, d.a_sq),
            err: 0.0,
            terms: 0,
        });
    }

    let term = |n: i64| {
        let d = image_distances(n, point, geometry);
        image_term(omega, y2, d.a, d.a_sq) - image_term(omega, y2, d.b, d.b_sq)
    };
    let sum = image_series(policy, |k| term(k) + term(-k), term);

    let last = policy.terms.max(1) as i64;
    let envelope = image_envelope(omega, y2, &image_distances(last, point, geometry))
        + image_envelope(omega, y2, &image_distances(-last, point, geometry));

    Ok(SpectralSample {
        omega,
        value: prefactor(omega) * sum,
        err: tail_estimate(omega, geometry, policy.terms, envelope),
        terms: policy.terms,
    })
}

/// Free-space density `σ⁰(ω, y)`.
pub fn sigma_vacuum(omega: f64, y: f64) -> Result<f64> {
    let omega = check_omega(omega)?;
    let y = ensure_finite(y, "y")?;
    let w3 = omega * omega * omega;
    Ok(w3 / (2.0 * PI * PI) * free_space_shape(omega * y.abs()))
}

/// `[σ(ω, x, x) − σ⁰(ω, 0)] / σ⁰(ω, 0)`; negative values are sub-vacuum.
pub fn normalized_difference(
    omega: f64,
    x: f64,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let sample = sigma_yy_diag(omega, x, geometry, policy)?;
    let vacuum = sigma_vacuum(omega, 0.0)?;
    Ok((sample.value - vacuum) / vacuum)
}

/// `10·log₁₀[σ(ω, x, x)/σ⁰(ω, 0)]`, undefined where the ratio is not
/// positive (below the cutoff the truncated density hovers around zero).
pub fn suppression_db(
    omega: f64,
    x: f64,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
) -> Result<SuppressionValue> {
    let sample = sigma_yy_diag(omega, x, geometry, policy)?;
    let vacuum = sigma_vacuum(omega, 0.0)?;
    Ok(SuppressionValue::from_ratio(sample.value / vacuum))
}
