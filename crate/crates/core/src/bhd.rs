//! Balanced homodyne detector between the plates.
//!
//! Two photodiodes at the same distance `x` from the first plate are driven
//! by a local oscillator (LO) whose field has opposite sign at the two
//! diodes. To leading order the mean output is linear in the kernel-filtered
//! field at the diodes and the variance in the ground state is
//! `A²·[R(1,1) + R(1,2) + R(2,1) + R(2,2)]`, where
//! `R(p, q) = ∫ dω k(ω)² σ(ω, p, q)` is the density smeared by the LO
//! spectrum. The microscopic photodiode response only enters through the
//! calibration constant `A(ω_LO)`, so outputs are in detector units.
//!
//! The LO is a TE mode of the cavity with Hertz potential
//! `m = sin(kz − ωt) cos(nπx/a) cos(py)` and `ω² = (nπ/a)² + p² + k²`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, CasimirError, Result};
use crate::imagesum::TruncationPolicy;
use crate::quadrature::{integrate, QuadratureSpec};
use crate::spectral::sigma_yy;
use crate::units::{CavityGeometry, FieldPoint};

/// Half-width of the integration window in units of the kernel width.
pub const KERNEL_WINDOW: f64 = 6.0;

const UNIT_Y: [f64; 3] = [0.0, 1.0, 0.0];

/// Gaussian LO amplitude spectrum
/// `k(ω) = amplitude·exp(−(ω − ω_LO)²/(2·width²))` along `polarization`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoKernel {
    pub omega_lo: f64,
    pub width: f64,
    pub amplitude: f64,
    pub polarization: [f64; 3],
    /// Phase time `t₀` of the LO.
    pub t0: f64,
}

impl LoKernel {
    pub fn new(omega_lo: f64, width: f64, amplitude: f64) -> Result<Self> {
        let kernel = Self {
            omega_lo,
            width,
            amplitude,
            polarization: UNIT_Y,
            t0: 0.0,
        };
        kernel.validate()?;
        Ok(kernel)
    }

    /// Kernel with prescribed `κ = ∫ k(ω)² dω`.
    pub fn with_norm(omega_lo: f64, width: f64, kappa: f64) -> Result<Self> {
        if !(kappa >= 0.0 && width > 0.0) {
            return Err(CasimirError::InvalidInput("need kappa >= 0 and width > 0".into()));
        }
        Self::new(omega_lo, width, (kappa / (width * PI.sqrt())).sqrt())
    }

    pub fn with_phase_time(mut self, t0: f64) -> Result<Self> {
        self.t0 = ensure_finite(t0, "t0")?;
        Ok(self)
    }

    pub fn with_polarization(mut self, polarization: [f64; 3]) -> Result<Self> {
        self.polarization = polarization;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for (v, name) in [
            (self.omega_lo, "omega_lo"),
            (self.width, "width"),
            (self.amplitude, "amplitude"),
            (self.t0, "t0"),
        ] {
            ensure_finite(v, name)?;
        }
        if self.omega_lo <= 0.0 {
            return Err(CasimirError::InvalidInput("LO frequency must be positive".into()));
        }
        if self.width <= 0.0 {
            return Err(CasimirError::InvalidInput("kernel width must be positive".into()));
        }
        if self.amplitude < 0.0 {
            return Err(CasimirError::InvalidInput("kernel amplitude must be non-negative".into()));
        }
        if self.width > self.omega_lo / 10.0 {
            return Err(CasimirError::InvalidInput(format!(
                "kernel width {} exceeds omega_lo/10 = {}; the LO must be sharply concentrated",
                self.width,
                self.omega_lo / 10.0
            )));
        }
        let norm: f64 = self.polarization.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(CasimirError::InvalidInput("polarization must be a unit vector".into()));
        }
        // only E_y correlations are available
        if (self.polarization[1].abs() - 1.0).abs() > 1e-12 {
            return Err(CasimirError::InvalidInput(
                "only y-polarized local oscillators are supported".into(),
            ));
        }
        Ok(())
    }

    pub fn amplitude_at(&self, omega: f64) -> f64 {
        let d = (omega - self.omega_lo) / self.width;
        self.amplitude * (-0.5 * d * d).exp()
    }

    /// `κ = ∫ k(ω)² dω = amplitude²·width·√π`.
    pub fn norm_squared(&self) -> f64 {
        self.amplitude * self.amplitude * self.width * PI.sqrt()
    }

    pub fn window(&self) -> (f64, f64) {
        (
            self.omega_lo - KERNEL_WINDOW * self.width,
            self.omega_lo + KERNEL_WINDOW * self.width,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub diode1: FieldPoint,
    pub diode2: FieldPoint,
    /// `A(ω_LO)`, arbitrary detector units.
    pub calibration: f64,
}

impl DetectorConfig {
    pub fn new(diode1: FieldPoint, diode2: FieldPoint, calibration: f64, geometry: &CavityGeometry) -> Result<Self> {
        let config = Self {
            diode1,
            diode2,
            calibration,
        };
        config.validate(geometry)?;
        Ok(config)
    }

    pub fn validate(&self, geometry: &CavityGeometry) -> Result<()> {
        self.diode1.validate(geometry)?;
        self.diode2.validate(geometry)?;
        let c = ensure_finite(self.calibration, "calibration")?;
        if c <= 0.0 {
            return Err(CasimirError::InvalidInput("calibration A(omega_LO) must be positive".into()));
        }
        Ok(())
    }
}

/// A TE cavity mode used as local oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoMode {
    /// Transverse index `n` (1 for TE₁).
    pub index: u32,
    /// Wave number along `y`.
    pub p: f64,
    /// Wave number along `z`.
    pub k: f64,
    pub omega: f64,
}

impl LoMode {
    pub fn new(index: u32, p: f64, k: f64, geometry: &CavityGeometry) -> Result<Self> {
        let omega = dispersion_omega(index, p, k, geometry)?;
        Ok(Self { index, p, k, omega })
    }

    pub fn te1(p: f64, k: f64, geometry: &CavityGeometry) -> Result<Self> {
        Self::new(1, p, k, geometry)
    }

    /// Relative violation of the dispersion relation.
    pub fn dispersion_residual(&self, geometry: &CavityGeometry) -> f64 {
        let kx = self.index as f64 * PI / geometry.separation();
        let rhs = kx * kx + self.p * self.p + self.k * self.k;
        (self.omega * self.omega - rhs).abs() / rhs
    }
}

/// `ω = √((nπ/a)² + p² + k²)` with `c = 1`.
pub fn dispersion_omega(index: u32, p: f64, k: f64, geometry: &CavityGeometry) -> Result<f64> {
    if index == 0 {
        return Err(CasimirError::InvalidInput("TE mode index must be at least 1".into()));
    }
    let p = ensure_finite(p, "p")?;
    let k = ensure_finite(k, "k")?;
    if p < 0.0 || k < 0.0 {
        return Err(CasimirError::InvalidInput("wave numbers must be non-negative".into()));
    }
    let kx = index as f64 * PI / geometry.separation();
    Ok((kx * kx + p * p + k * k).sqrt())
}

/// `(F_x, F_y)` of the mode at `(t, x, y, z)`:
/// `F_x = −ωp cos(kz − ωt) cos(nπx/a) sin(py)`,
/// `F_y = (ωnπ/a) cos(kz − ωt) sin(nπx/a) cos(py)`.
pub fn lo_mode_fields(mode: &LoMode, t: f64, x: f64, y: f64, z: f64, geometry: &CavityGeometry) -> Result<(f64, f64)> {
    FieldPoint::new(x, y, geometry)?;
    ensure_finite(t, "t")?;
    ensure_finite(z, "z")?;
    if mode.dispersion_residual(geometry) > 1e-12 {
        return Err(CasimirError::InvalidInput("mode violates the dispersion relation".into()));
    }
    let kx = mode.index as f64 * PI / geometry.separation();
    let wave = (mode.k * z - mode.omega * t).cos();
    let fx = -mode.omega * mode.p * wave * (kx * x).cos() * (mode.p * y).sin();
    let fy = mode.omega * kx * wave * (kx * x).sin() * (mode.p * y).cos();
    Ok((fx, fy))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BalanceReport {
    /// `max_t |F_y(1) + F_y(2)| / max_t |F_y|`
    pub residual: f64,
    pub balanced: bool,
}

/// How far the LO field at the two diodes is from being exactly opposite.
/// Both diodes sit at `z = 0`, so the time dependence is a common factor
/// and the maximum over a period is attained at `kz − ωt = 0`.
pub fn check_balance(
    config: &DetectorConfig,
    mode: &LoMode,
    tolerance: f64,
    geometry: &CavityGeometry,
) -> Result<BalanceReport> {
    config.validate(geometry)?;
    let (_, f1) = lo_mode_fields(mode, 0.0, config.diode1.x, config.diode1.y, 0.0, geometry)?;
    let (_, f2) = lo_mode_fields(mode, 0.0, config.diode2.x, config.diode2.y, 0.0, geometry)?;
    let peak = f1.abs().max(f2.abs());
    if peak == 0.0 {
        return Err(CasimirError::InvalidInput("LO field vanishes at both diodes".into()));
    }
    let residual = (f1 + f2).abs() / peak;
    Ok(BalanceReport {
        residual,
        balanced: residual <= tolerance,
    })
}

/// One monochromatic component of a classical (coherent-state) field,
/// `E_y(t) = amplitude_i·cos(ωt + phase)` at diode `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldComponent {
    pub omega: f64,
    pub amplitude_diode1: f64,
    pub amplitude_diode2: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassicalField {
    pub components: Vec<FieldComponent>,
}

impl ClassicalField {
    /// The coherent state of the LO mode itself, with field amplitude
    /// `strength` times the mode function.
    pub fn from_lo_mode(mode: &LoMode, config: &DetectorConfig, strength: f64, geometry: &CavityGeometry) -> Result<Self> {
        let (_, f1) = lo_mode_fields(mode, 0.0, config.diode1.x, config.diode1.y, 0.0, geometry)?;
        let (_, f2) = lo_mode_fields(mode, 0.0, config.diode2.x, config.diode2.y, 0.0, geometry)?;
        Ok(Self {
            components: vec![FieldComponent {
                omega: mode.omega,
                amplitude_diode1: strength * f1,
                amplitude_diode2: strength * f2,
                phase: 0.0,
            }],
        })
    }
}

/// Mean detector current. The ground state has vanishing one-point
/// function; a classical field contributes
/// `A·Σ_c k(ω_c)·[E_c(1) + E_c(2)]·cos(ω_c t₀ + φ_c)`.
pub fn mean_current(config: &DetectorConfig, kernel: &LoKernel, field: Option<&ClassicalField>) -> Result<f64> {
    kernel.validate()?;
    let Some(field) = field else {
        return Ok(0.0);
    };
    let mut total = 0.0;
    for c in &field.components {
        for (v, name) in [
            (c.omega, "component omega"),
            (c.amplitude_diode1, "component amplitude"),
            (c.amplitude_diode2, "component amplitude"),
            (c.phase, "component phase"),
        ] {
            ensure_finite(v, name)?;
        }
        total += kernel.amplitude_at(c.omega)
            * (c.amplitude_diode1 + c.amplitude_diode2)
            * (c.omega * kernel.t0 + c.phase).cos();
    }
    Ok(config.calibration * total)
}

/// `R(p, q) = ∫ dω k(ω)² σ(ω, p, q)` over `ω_LO ± 6·width`. Panels are split
/// at the density jumps `ω = nπ/a`.
pub fn smeared_r(
    p: &FieldPoint,
    q: &FieldPoint,
    kernel: &LoKernel,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
    quadrature: &QuadratureSpec,
) -> Result<f64> {
    kernel.validate()?;
    p.validate(geometry)?;
    q.validate(geometry)?;
    if p.x != q.x {
        return Err(CasimirError::InvalidInput(
            "correlations are available only between points at the same distance from the plates".into(),
        ));
    }
    let (lo, hi) = kernel.window();
    if lo <= 0.0 {
        return Err(CasimirError::InvalidInput(
            "kernel window reaches non-positive frequencies".into(),
        ));
    }
    if kernel.amplitude == 0.0 {
        return Ok(0.0);
    }
    let offset = FieldPoint::new(p.x, q.y - p.y, geometry)?;
    let cutoff = geometry.cutoff();
    let first = (lo / cutoff).ceil() as i64;
    let last = (hi / cutoff).floor() as i64;
    let jumps: Vec<f64> = (first..=last).map(|n| n as f64 * cutoff).collect();

    let result = integrate(
        |omega| {
            let k = kernel.amplitude_at(omega);
            Ok(k * k * sigma_yy(omega, &offset, geometry, policy)?.value)
        },
        lo,
        hi,
        &jumps,
        quadrature,
    )?;
    Ok(result.value)
}

/// Ground-state variance of the detector output,
/// `A²·[R(1,1) + R(1,2) + R(2,1) + R(2,2)]`.
pub fn variance_current(
    config: &DetectorConfig,
    kernel: &LoKernel,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
    quadrature: &QuadratureSpec,
) -> Result<f64> {
    config.validate(geometry)?;
    let (d1, d2) = (&config.diode1, &config.diode2);
    let r11 = smeared_r(d1, d1, kernel, geometry, policy, quadrature)?;
    // σ on the diagonal depends on x only
    let r22 = if d2.x == d1.x {
        r11
    } else {
        smeared_r(d2, d2, kernel, geometry, policy, quadrature)?
    };
    let r12 = smeared_r(d1, d2, kernel, geometry, policy, quadrature)?;
    let a2 = config.calibration * config.calibration;
    Ok(a2 * (r11 + r12 + r12 + r22))
}

/// Far-separation approximation `2A²·R(d, d)`, valid once the cross terms
/// are negligible.
pub fn variance_approx(
    diode: &FieldPoint,
    kernel: &LoKernel,
    config: &DetectorConfig,
    geometry: &CavityGeometry,
    policy: &TruncationPolicy,
    quadrature: &QuadratureSpec,
) -> Result<f64> {
    config.validate(geometry)?;
    let r = smeared_r(diode, diode, kernel, geometry, policy, quadrature)?;
    Ok(2.0 * config.calibration * config.calibration * r)
}
