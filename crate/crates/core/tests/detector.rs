use std::f64::consts::PI;

use casimir_core::bhd::{
    dispersion_omega, smeared_r, variance_approx, variance_current, DetectorConfig, LoKernel,
};
use casimir_core::quadrature::QuadratureSpec;
use casimir_core::spectral::{sigma_yy, sigma_yy_diag, sigma_yy_terms};
use casimir_core::{CavityGeometry, FieldPoint, ImageTerms, PhysicalScale, TruncationPolicy, UnitTag};

fn unit() -> CavityGeometry {
    CavityGeometry::unit()
}

fn fp(x: f64, y: f64) -> FieldPoint {
    FieldPoint::new(x, y, &unit()).unwrap()
}

#[test]
fn cutoff_frequency_in_si_units() {
    let w = dispersion_omega(1, 0.0, 0.0, &unit()).unwrap();
    let si = PhysicalScale::new(1.0).unwrap().from_internal(w, UnitTag::Frequency).unwrap();
    assert!((si.value / 9.42e14 - 1.0).abs() < 1e-3, "{}", si.value);
}

#[test]
fn narrow_band_limit_within_one_percent() {
    let policy = TruncationPolicy::default();
    let quad = QuadratureSpec::default();
    let kappa = 1.0;
    let w_lo = 2.0 * PI;
    let kernel = LoKernel::with_norm(w_lo, w_lo / 100.0, kappa).unwrap();
    for (p, q) in [(fp(0.75, 0.0), fp(0.75, 0.0)), (fp(0.25, 0.0), fp(0.25, 0.0)), (fp(0.5, 0.0), fp(0.5, 3.0))] {
        let r = smeared_r(&p, &q, &kernel, &unit(), &policy, &quad).unwrap();
        let offset = fp(p.x, q.y - p.y);
        let direct = sigma_yy(w_lo, &offset, &unit(), &policy).unwrap().value;
        let diag = sigma_yy_diag(w_lo, p.x, &unit(), &policy).unwrap().value;
        assert!((r / kappa - direct).abs() <= 0.01 * diag.abs(), "{p:?} {q:?}: {r} vs {direct}");
    }
}

#[test]
fn narrow_band_error_scales_with_width_squared() {
    // few images keep σ smooth on the scale of the kernel
    let policy = TruncationPolicy::new(2);
    let quad = QuadratureSpec::default();
    let w_lo = 2.5 * PI;
    let p = fp(0.3, 0.0);
    let direct = sigma_yy_diag(w_lo, p.x, &unit(), &policy).unwrap().value;
    let gap = |width: f64| {
        let kernel = LoKernel::with_norm(w_lo, width, 1.0).unwrap();
        smeared_r(&p, &p, &kernel, &unit(), &policy, &quad).unwrap() - direct
    };
    let ratio = gap(0.02) / gap(0.01);
    assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
}

#[test]
fn sub_cutoff_diagonal_small_against_vacuum() {
    let policy = TruncationPolicy::default();
    let quad = QuadratureSpec::default();
    let kernel = LoKernel::new(2.5, 0.025, 1.0).unwrap();
    let p = fp(0.5, 0.0);
    let r = smeared_r(&p, &p, &kernel, &unit(), &policy, &quad).unwrap();
    // vacuum R with the same kernel
    let vac = casimir_core::quadrature::integrate(
        |w| {
            let k = kernel.amplitude_at(w);
            Ok(k * k * sigma_yy_terms(w, &p, &unit(), &policy, ImageTerms::FreeSpace)?.value)
        },
        kernel.window().0,
        kernel.window().1,
        &[],
        &quad,
    )
    .unwrap()
    .value;
    assert!(r.abs() < 0.05 * vac, "{r} vs {vac}");
}

#[test]
fn variance_matches_far_separation_approximation() {
    let policy = TruncationPolicy::default();
    let quad = QuadratureSpec::default();
    let w_lo = 2.0 * PI;
    let kernel = LoKernel::new(w_lo, w_lo / 100.0, 1.0).unwrap();
    let config = DetectorConfig::new(fp(0.75, 0.0), fp(0.75, 50.0), 1.5, &unit()).unwrap();
    let full = variance_current(&config, &kernel, &unit(), &policy, &quad).unwrap();
    let approx = variance_approx(&config.diode1, &kernel, &config, &unit(), &policy, &quad).unwrap();
    assert!(full >= 0.0);
    assert!((full - approx).abs() <= 0.1 * approx, "{full} vs {approx}");

    // narrow-band limit 2A²κ σ(ω_LO, x, x)
    let expected = 2.0 * 1.5 * 1.5 * kernel.norm_squared() * sigma_yy_diag(w_lo, 0.75, &unit(), &policy).unwrap().value;
    assert!((approx - expected).abs() <= 0.01 * expected);
}

#[test]
fn variance_quadratic_in_kernel_amplitude() {
    let policy = TruncationPolicy::new(200);
    let quad = QuadratureSpec::default();
    let config = DetectorConfig::new(fp(0.6, 0.0), fp(0.6, 7.0), 0.8, &unit()).unwrap();
    let k1 = LoKernel::new(2.3 * PI, 0.05, 0.9).unwrap();
    let k2 = LoKernel::new(2.3 * PI, 0.05, 1.8).unwrap();
    let v1 = variance_current(&config, &k1, &unit(), &policy, &quad).unwrap();
    let v2 = variance_current(&config, &k2, &unit(), &policy, &quad).unwrap();
    assert!((v2 / v1 - 4.0).abs() <= 4e-12, "{}", v2 / v1);
}

#[test]
fn sub_cutoff_variance_nearly_zero() {
    let policy = TruncationPolicy::default();
    let quad = QuadratureSpec::default();
    let config = DetectorConfig::new(fp(0.5, 0.0), fp(0.5, 50.0), 1.0, &unit()).unwrap();
    let sub = LoKernel::new(2.5, 0.025, 1.0).unwrap();
    let above = LoKernel::new(2.5 * PI, 0.025, 1.0).unwrap();
    let v_sub = variance_approx(&config.diode1, &sub, &config, &unit(), &policy, &quad).unwrap();
    // vacuum scale ∝ ω³
    let v_free = 2.0 * sub.norm_squared() * 2.5f64.powi(3) / (6.0 * PI * PI);
    assert!(v_sub.abs() < 0.05 * v_free);
    let v_above = variance_approx(&config.diode1, &above, &config, &unit(), &policy, &quad).unwrap();
    assert!(v_above > 10.0 * v_sub.abs());
}
