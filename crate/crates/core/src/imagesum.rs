//! Method-of-images sums for the scalar kernel and the `E_y E_y` ground-state
//! two-point function between the plates.
//!
//! The two field points are `(s, x, 0, 0)` and `(0, x, y, 0)`: same distance
//! `x` from the first plate, transverse offset `y`, time separation `s`.
//! Image `n` contributes through the distances
//! `A = √((nL)² + y²)` and `B = √((2x − nL)² + y²)` with `L = 2a`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, CasimirError, Result};
use crate::units::{CavityGeometry, FieldPoint};

/// Half-width of the band around an image light cone inside which
/// pointwise evaluation is refused.
pub const LIGHT_CONE_GUARD: f64 = 1e-6;

/// Default symmetric image cutoff.
pub const DEFAULT_TERMS: usize = 1000;

/// Default finite-difference step for [`two_point_yy_by_derivative`].
pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// Number of trailing partial sums averaged when acceleration is on.
pub const ACCELERATION_WINDOW: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        Ok(Self {
            t: ensure_finite(t, "t")?,
            x: ensure_finite(x, "x")?,
            y: ensure_finite(y, "y")?,
            z: ensure_finite(z, "z")?,
        })
    }
}

/// Which image sum: `F⁻` pairs `x − x̃`, `F⁺` pairs `x + x̃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImageSign {
    Minus,
    Plus,
}

/// How many images enter a sum and in which order they are added.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// Sum over `n ∈ [−terms, terms]`.
    pub terms: usize,
    /// Average the last [`ACCELERATION_WINDOW`] symmetric partial sums.
    pub accelerate: bool,
    /// Add `(+n, −n)` pairs in ascending `|n|` and the `n = 0` term last;
    /// otherwise add `n = −N ..= N` in sequence.
    pub pair_symmetric: bool,
}

impl TruncationPolicy {
    pub fn new(terms: usize) -> Self {
        Self {
            terms,
            ..Self::default()
        }
    }

    pub fn accelerated(mut self, on: bool) -> Self {
        self.accelerate = on;
        self
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            terms: DEFAULT_TERMS,
            accelerate: false,
            pair_symmetric: true,
        }
    }
}

/// Restricts a sum to a subset of its terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ImageTerms {
    /// Every `A` and `B` term for `|n| ≤ N`.
    #[default]
    All,
    /// Only the `n = 0` `A` term: the field without plates.
    FreeSpace,
}

/// Distances from the second point to the `n`-th images of the first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImageDistances {
    pub n: i64,
    /// `(nL)² + y²`
    pub a_sq: f64,
    /// `(2x − nL)² + y²`
    pub b_sq: f64,
    pub a: f64,
    pub b: f64,
}

pub fn image_distances(n: i64, point: &FieldPoint, geometry: &CavityGeometry) -> ImageDistances {
    let nl = n as f64 * geometry.period();
    let y2 = point.y * point.y;
    let dx = 2.0 * point.x - nl;
    let a_sq = nl * nl + y2;
    let b_sq = dx * dx + y2;
    ImageDistances {
        n,
        a_sq,
        b_sq,
        a: a_sq.sqrt(),
        b: b_sq.sqrt(),
    }
}

/// Sums `term(n)` over the images selected by `policy`, in its fixed order.
pub(crate) fn sum_images<F>(policy: &TruncationPolicy, mut term: F) -> Result<f64>
where
    F: FnMut(i64) -> Result<f64>,
{
    let n_max = policy.terms as i64;
    let mut total = 0.0;
    if policy.pair_symmetric {
        for k in 1..=n_max {
            total += term(k)? + term(-k)?;
        }
        total += term(0)?;
    } else {
        for n in -n_max..=n_max {
            total += term(n)?;
        }
    }
    Ok(total)
}

/// Scalar image sum
/// `−(1/4π²) Σₙ 1/[(x ∓ x̃ − nL)² + (y − ỹ)² + (z − z̃)² − (t − t̃)²]`.
pub fn image_sum_f(
    sign: ImageSign,
    p: &SpacetimePoint,
    q: &SpacetimePoint,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let period = geometry.period();
    let base = match sign {
        ImageSign::Minus => p.x - q.x,
        ImageSign::Plus => p.x + q.x,
    };
    let dy = p.y - q.y;
    let dz = p.z - q.z;
    let dt = p.t - q.t;
    let rest = dy * dy + dz * dz - dt * dt;
    let label = match sign {
        ImageSign::Minus => "F-",
        ImageSign::Plus => "F+",
    };
    let sum = sum_images(policy, |n| {
        let dx = base - n as f64 * period;
        let denominator = dx * dx + rest;
        if denominator.abs() < LIGHT_CONE_GUARD {
            return Err(CasimirError::LightConeProximity {
                image: n,
                term: label,
                denominator,
            });
        }
        Ok(1.0 / denominator)
    })?;
    Ok(-sum / (4.0 * PI * PI))
}

fn guard_denominator(value: f64, image: i64, term: &'static str) -> Result<f64> {
    if value.abs() < LIGHT_CONE_GUARD {
        Err(CasimirError::LightConeProximity {
            image,
            term,
            denominator: value,
        })
    } else {
        Ok(value)
    }
}

/// Closed-form `⟨E_y(s, x, 0, 0) E_y(0, x, y, 0)⟩`:
///
/// `(1/π²) Σₙ [(A² + s²)/(s² − A²)³ − (B² + s²)/(s² − B²)³]
///  + (2y²/π²) Σₙ [1/(s² − B²)³ − 1/(s² − A²)³]`.
pub fn two_point_yy_closed(
    s: f64,
    point: &FieldPoint,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
) -> Result<f64> {
    two_point_yy_closed_terms(s, point, geometry, policy, ImageTerms::All)
}

pub fn two_point_yy_closed_terms(
    s: f64,
    point: &FieldPoint,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
    terms: ImageTerms,
) -> Result<f64> {
    ensure_finite(s, "s")?;
    point.validate(geometry)?;
    let s2 = s * s;
    let y2 = point.y * point.y;

    let a_term = |d: &ImageDistances| -> Result<f64> {
        let den = guard_denominator(s2 - d.a_sq, d.n, "A")?;
        if d.a_sq == 0.0 {
            // n = 0, y = 0: (A² + s²)/(s² − A²)³ → 1/s⁴, y² part absent.
            return Ok(1.0 / (s2 * s2));
        }
        Ok((d.a_sq + s2 - 2.0 * y2) / (den * den * den))
    };
    let b_term = |d: &ImageDistances| -> Result<f64> {
        let den = guard_denominator(s2 - d.b_sq, d.n, "B")?;
        Ok((d.b_sq + s2 - 2.0 * y2) / (den * den * den))
    };

    let total = match terms {
        ImageTerms::All => sum_images(policy, |n| {
            let d = image_distances(n, point, geometry);
            Ok(a_term(&d)? - b_term(&d)?)
        })?,
        ImageTerms::FreeSpace => a_term(&image_distances(0, point, geometry))?,
    };
    Ok(total / (PI * PI))
}

/// Finite-difference route to the two-point function: the transverse
/// Laplacian `(∂x² + ∂z²)[F⁻ − F⁺]`, acting on the first point only, with the
/// five-point stencil of step `h`. Within `2h` of a plate the `x` part
/// switches to a one-sided stencil that stays inside the gap.
pub fn two_point_yy_by_derivative(
    s: f64,
    point: &FieldPoint,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
    h: f64,
) -> Result<f64> {
    ensure_finite(s, "s")?;
    ensure_finite(h, "h")?;
    point.validate(geometry)?;
    let a = geometry.separation();
    if !(h > 0.0 && 4.0 * h < a) {
        return Err(CasimirError::InvalidInput(format!(
            "finite-difference step {h} must lie in (0, a/4)"
        )));
    }

    // Light-cone guards widened by the stencil reach.
    let s2 = s * s;
    let s_abs = s.abs();
    let n_max = policy.terms as i64;
    for n in -n_max..=n_max {
        let d = image_distances(n, point, geometry);
        for (dist, dist_sq, label) in [(d.a, d.a_sq, "A"), (d.b, d.b_sq, "B")] {
            if (s2 - dist_sq).abs() < LIGHT_CONE_GUARD || (s_abs - dist).abs() < 2.0 * h {
                return Err(CasimirError::LightConeProximity {
                    image: n,
                    term: label,
                    denominator: s2 - dist_sq,
                });
            }
        }
    }

    let q = SpacetimePoint {
        t: 0.0,
        x: point.x,
        y: point.y,
        z: 0.0,
    };
    let f = |dx: f64, dz: f64| -> Result<f64> {
        let p = SpacetimePoint {
            t: s,
            x: point.x + dx,
            y: 0.0,
            z: dz,
        };
        Ok(image_sum_f(ImageSign::Minus, &p, &q, geometry, policy)?
            - image_sum_f(ImageSign::Plus, &p, &q, geometry, policy)?)
    };

    let h2 = h * h;
    let f0 = f(0.0, 0.0)?;
    let d2x = if point.x < 2.0 * h {
        (2.0 * f0 - 5.0 * f(h, 0.0)? + 4.0 * f(2.0 * h, 0.0)? - f(3.0 * h, 0.0)?) / h2
    } else if point.x > a - 2.0 * h {
        (2.0 * f0 - 5.0 * f(-h, 0.0)? + 4.0 * f(-2.0 * h, 0.0)? - f(-3.0 * h, 0.0)?) / h2
    } else {
        (f(h, 0.0)? - 2.0 * f0 + f(-h, 0.0)?) / h2
    };
    let d2z = (f(0.0, h)? - 2.0 * f0 + f(0.0, -h)?) / h2;
    Ok(d2x + d2z)
}
