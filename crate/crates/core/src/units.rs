//! Dimensionless unit system (`c = 1`, lengths in units of the plate
//! separation) and guarded frequency grids.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, CasimirError, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default distance kept between grid points and the density jumps at
/// `ω = nπ` (in units of `c/a`).
pub const DEFAULT_GUARD: f64 = 1e-3;

/// Two plates at `x = 0` and `x = a`. Image copies repeat with period `2a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityGeometry {
    a: f64,
}

impl CavityGeometry {
    pub fn new(a: f64) -> Result<Self> {
        let a = ensure_finite(a, "plate separation")?;
        if a <= 0.0 {
            return Err(CasimirError::InvalidInput(format!(
                "plate separation must be positive, got {a}"
            )));
        }
        Ok(Self { a })
    }

    /// The canonical internal geometry, `a = 1`.
    pub fn unit() -> Self {
        Self { a: 1.0 }
    }

    pub fn separation(&self) -> f64 {
        self.a
    }

    /// Image period `L = 2a`.
    pub fn period(&self) -> f64 {
        2.0 * self.a
    }

    /// Lowest cavity frequency `π/a` (with `c = 1`).
    pub fn cutoff(&self) -> f64 {
        PI / self.a
    }
}

impl Default for CavityGeometry {
    fn default() -> Self {
        Self::unit()
    }
}

/// A point in the `z = 0` plane between the plates: `x` is the distance from
/// the plate at the origin, `y` the transverse offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldPoint {
    pub x: f64,
    pub y: f64,
}

impl FieldPoint {
    pub fn new(x: f64, y: f64, geometry: &CavityGeometry) -> Result<Self> {
        let x = ensure_finite(x, "x")?;
        let y = ensure_finite(y, "y")?;
        if !(0.0..=geometry.separation()).contains(&x) {
            return Err(CasimirError::InvalidInput(format!(
                "x = {x} lies outside the gap [0, {}]",
                geometry.separation()
            )));
        }
        Ok(Self { x, y })
    }

    pub fn validate(&self, geometry: &CavityGeometry) -> Result<()> {
        Self::new(self.x, self.y, geometry).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitTag {
    /// Micrometres.
    Length,
    /// Angular frequency, rad/s.
    Frequency,
    /// Seconds.
    Time,
}

impl FromStr for UnitTag {
    type Err = CasimirError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "length" => Ok(UnitTag::Length),
            "frequency" => Ok(UnitTag::Frequency),
            "time" => Ok(UnitTag::Time),
            other => Err(CasimirError::UnknownUnit(other.to_string())),
        }
    }
}

impl fmt::Display for UnitTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            UnitTag::Length => "length",
            UnitTag::Frequency => "frequency",
            UnitTag::Time => "time",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: UnitTag,
}

impl Quantity {
    pub fn new(value: f64, unit: UnitTag) -> Self {
        Self { value, unit }
    }
}

/// Physical scale used at the I/O boundary: plate separation in μm and the
/// speed of light.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalScale {
    pub a_microns: f64,
    pub speed_of_light: f64,
}

impl PhysicalScale {
    pub fn new(a_microns: f64) -> Result<Self> {
        let a_microns = ensure_finite(a_microns, "plate separation")?;
        if a_microns <= 0.0 {
            return Err(CasimirError::InvalidInput(format!(
                "plate separation must be positive, got {a_microns} μm"
            )));
        }
        Ok(Self {
            a_microns,
            speed_of_light: SPEED_OF_LIGHT,
        })
    }

    pub fn with_speed_of_light(mut self, c: f64) -> Result<Self> {
        let c = ensure_finite(c, "speed of light")?;
        if c <= 0.0 {
            return Err(CasimirError::InvalidInput("speed of light must be positive".into()));
        }
        self.speed_of_light = c;
        Ok(self)
    }

    fn a_metres(&self) -> f64 {
        self.a_microns * 1e-6
    }

    /// Physical quantity to its dimensionless internal value.
    pub fn to_internal(&self, quantity: Quantity) -> Result<f64> {
        let v = ensure_finite(quantity.value, "physical quantity")?;
        Ok(match quantity.unit {
            UnitTag::Length => v / self.a_microns,
            UnitTag::Frequency => v * self.a_metres() / self.speed_of_light,
            UnitTag::Time => v * self.speed_of_light / self.a_metres(),
        })
    }

    /// Inverse of [`PhysicalScale::to_internal`].
    pub fn from_internal(&self, value: f64, unit: UnitTag) -> Result<Quantity> {
        let v = ensure_finite(value, "internal value")?;
        let physical = match unit {
            UnitTag::Length => v * self.a_microns,
            UnitTag::Frequency => v * self.speed_of_light / self.a_metres(),
            UnitTag::Time => v * self.a_metres() / self.speed_of_light,
        };
        Ok(Quantity::new(physical, unit))
    }
}

impl Default for PhysicalScale {
    fn default() -> Self {
        Self {
            a_microns: 1.0,
            speed_of_light: SPEED_OF_LIGHT,
        }
    }
}

/// Distance from `omega` to the nearest integer multiple of `π`, together
/// with that multiple.
pub fn nearest_pi_multiple(omega: f64) -> (i64, f64) {
    let n = (omega / PI).round();
    (n as i64, (omega - n * PI).abs())
}

/// True when `omega` lies within `guard` of a density discontinuity.
pub fn near_discontinuity(omega: f64, guard: f64) -> bool {
    nearest_pi_multiple(omega).1 < guard
}

/// Strictly increasing angular frequencies (units of `c/a`) kept at least
/// `guard` away from every multiple of `π`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyGrid {
    points: Vec<f64>,
    guard: f64,
}

impl FrequencyGrid {
    /// Uniform grid of `count` points on `[omega_min, omega_max]`. A point
    /// that falls within `guard` of some `nπ` is pushed to `nπ ± guard`,
    /// away from `nπ` when that stays inside the range, otherwise to the
    /// other side.
    pub fn build(omega_min: f64, omega_max: f64, count: usize, guard: f64) -> Result<Self> {
        ensure_finite(omega_min, "omega_min")?;
        ensure_finite(omega_max, "omega_max")?;
        ensure_finite(guard, "guard")?;
        if !(0.0 <= omega_min && omega_min < omega_max) {
            return Err(CasimirError::DegenerateRange {
                min: omega_min,
                max: omega_max,
                reason: "need 0 <= omega_min < omega_max".into(),
            });
        }
        if count < 2 {
            return Err(CasimirError::InvalidInput(format!(
                "grid needs at least 2 points, got {count}"
            )));
        }
        if !(guard > 0.0 && guard < PI / 4.0) {
            return Err(CasimirError::InvalidInput(format!(
                "guard offset {guard} outside (0, π/4)"
            )));
        }

        let step = (omega_max - omega_min) / (count - 1) as f64;
        let mut points = Vec::with_capacity(count);
        for i in 0..count {
            let raw = if i == count - 1 {
                omega_max
            } else {
                omega_min + i as f64 * step
            };
            points.push(Self::displace(raw, omega_min, omega_max, guard)?);
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CasimirError::DegenerateRange {
                min: omega_min,
                max: omega_max,
                reason: "guard displacement breaks strict ordering; use fewer points or a smaller guard"
                    .into(),
            });
        }
        Ok(Self { points, guard })
    }

    fn displace(raw: f64, lo: f64, hi: f64, guard: f64) -> Result<f64> {
        let (n, dist) = nearest_pi_multiple(raw);
        if dist >= guard {
            return Ok(raw);
        }
        let centre = n as f64 * PI;
        let outward = if raw >= centre { 1.0 } else { -1.0 };
        for dir in [outward, -outward] {
            let moved = centre + dir * guard;
            if (lo..=hi).contains(&moved) && moved >= 0.0 {
                return Ok(moved);
            }
        }
        Err(CasimirError::DegenerateRange {
            min: lo,
            max: hi,
            reason: format!("guard band around {n}π swallows the range"),
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn guard(&self) -> f64 {
        self.guard
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
