//! `casimir validate`: oracle cross-checks and invariant suites over fixed
//! sample sets. Each check prints one PASS/FAIL line.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde_json::json;

use casimir_core::bhd::{check_balance, mean_current, variance_current, ClassicalField, DetectorConfig, LoKernel, LoMode};
use casimir_core::imagesum::{image_distances, two_point_yy_by_derivative, two_point_yy_closed};
use casimir_core::oracle::{convergence_report, sigma_via_numeric_ft, OracleConfig};
use casimir_core::quadrature::QuadratureSpec;
use casimir_core::spectral::{sigma_vacuum, sigma_yy, sigma_yy_diag, sigma_yy_terms};
use casimir_core::{CavityGeometry, FieldPoint, ImageTerms, Result, TruncationPolicy};

use crate::cli::{Format, ValidateArgs};
use crate::commands::Context;
use crate::error::CliError;
use crate::output::write_text;

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, outcome: Result<(bool, String)>) -> Check {
    match outcome {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn unit() -> CavityGeometry {
    CavityGeometry::unit()
}

fn vacuum_diagonal() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for k in 1..=50 {
        let w = 4.0 * PI * k as f64 / 50.0;
        let expected = w * w * w / (6.0 * PI * PI);
        worst = worst.max((sigma_vacuum(w, 0.0)? - expected).abs() / expected);
    }
    Ok((worst <= 1e-12, format!("max relative deviation {worst:e}")))
}

fn vacuum_embedding() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for i in 1..=20 {
        let w = 4.0 * PI * i as f64 / 20.0;
        for j in 0..20 {
            let y = 50.0 * j as f64 / 19.0;
            let p = FieldPoint::new(0.5, y, &unit())?;
            let restricted = sigma_yy_terms(w, &p, &unit(), &TruncationPolicy::default(), ImageTerms::FreeSpace)?;
            let vacuum = sigma_vacuum(w, y)?;
            let dev = (restricted.value - vacuum).abs();
            worst = worst.max(if vacuum == 0.0 { dev } else { dev / vacuum.abs() });
        }
    }
    Ok((worst <= 1e-12, format!("max relative deviation {worst:e} on 20x20 grid")))
}

fn boundary_zeros() -> Result<(bool, String)> {
    let mut exact = true;
    for n in [0, 1, 10, 100, 1000, 10_000] {
        for k in 1..=8 {
            exact &= sigma_yy_diag(0.5 * k as f64, 0.0, &unit(), &TruncationPolicy::new(n))?.value == 0.0;
        }
    }
    let mut worst: f64 = 0.0;
    for &w in &[1.5 * PI, 2.5 * PI, 3.5 * PI] {
        let s = sigma_yy_diag(w, 1.0, &unit(), &TruncationPolicy::new(10_000))?;
        worst = worst.max(s.value.abs() / sigma_vacuum(w, 0.0)?);
    }
    Ok((
        exact && worst <= 1e-3,
        format!("x=0 exact zero: {exact}; x=a residual {worst:e} of vacuum (N=1e4)"),
    ))
}

fn sub_cutoff() -> Result<(bool, String)> {
    let policy = TruncationPolicy::default().accelerated(true);
    let mut worst: f64 = 0.0;
    for &w in &[1.0, 2.0, 3.0] {
        for &x in &[0.25, 0.5, 0.75] {
            worst = worst.max(sigma_yy_diag(w, x, &unit(), &policy)?.value.abs() / sigma_vacuum(w, 0.0)?);
        }
    }
    Ok((worst < 0.05, format!("max |sigma|/vacuum {worst:.3e}")))
}

/// Sample set for the Fourier-transform cross-check.
pub const ORACLE_SAMPLES: [(f64, f64); 10] = [
    (1.3, 0.25),
    (1.5, 0.5),
    (1.8, 0.75),
    (2.2, 0.25),
    (2.5, 0.5),
    (2.7, 0.75),
    (3.3, 0.25),
    (3.5, 0.5),
    (3.7, 0.75),
    (3.9, 0.5),
];

fn oracle_agreement() -> Result<(bool, String)> {
    let policy = TruncationPolicy::default();
    let config = OracleConfig::default();
    let deviations: Vec<f64> = ORACLE_SAMPLES
        .par_iter()
        .map(|&(wt, x)| {
            let w = wt * PI;
            let p = FieldPoint::new(x, 0.0, &unit())?;
            let est = sigma_via_numeric_ft(w, &p, &unit(), &policy, &config)?;
            let closed = sigma_yy_diag(w, x, &unit(), &policy)?.value;
            Ok((est.value - closed).abs() / closed.abs().max(sigma_vacuum(w, 0.0)?))
        })
        .collect::<Result<_>>()?;
    let worst = deviations.iter().copied().fold(0.0, f64::max);
    Ok((worst <= 0.02, format!("max deviation {worst:.3e} of max(|sigma|, vacuum) over 10 points")))
}

fn oracle_vacuum_calibration() -> Result<(bool, String)> {
    let w = 2.0 * PI;
    let p = FieldPoint::new(0.5, 0.3, &unit())?;
    let config = OracleConfig {
        terms: ImageTerms::FreeSpace,
        ..OracleConfig::default()
    };
    let est = sigma_via_numeric_ft(w, &p, &unit(), &TruncationPolicy::default(), &config)?;
    let exact = sigma_vacuum(w, 0.3)?;
    let rel = (est.value - exact).abs() / exact.abs();
    Ok((rel <= 0.01, format!("relative deviation {rel:.3e}")))
}

fn convergence() -> Result<(bool, String)> {
    let p = FieldPoint::new(0.25, 0.0, &unit())?;
    let report = convergence_report(2.0 * PI, &p, &unit(), &[100, 1000, 10_000])?;
    let deltas: Vec<String> = report
        .rows
        .iter()
        .filter_map(|r| r.delta)
        .map(|d| format!("{d:.3e}"))
        .collect();
    Ok((report.monotone, format!("successive differences [{}]", deltas.join(", "))))
}

fn invariants() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    for &n in &[0usize, 7, 100, 1000] {
        let policy = TruncationPolicy::new(n);
        for k in 1..=12 {
            let w = 4.0 * PI * (k as f64 - 0.37) / 12.0;
            for &x in &[0.0, 0.1, 0.33, 0.5, 0.81, 1.0] {
                let left = sigma_yy_diag(w, x, &unit(), &policy)?;
                let right = sigma_yy_diag(w, 1.0 - x, &unit(), &policy)?;
                if (left.value - right.value).abs() > 2.0 * left.err.max(right.err) {
                    failures.push(format!("mirror w={w} x={x} N={n}"));
                }
                if left.value < -left.err {
                    failures.push(format!("positivity w={w} x={x} N={n}"));
                }
                let scaled = sigma_yy_diag(4.0 * w, x / 4.0, &CavityGeometry::new(0.25)?, &policy)?;
                if scaled.value / 64.0 != left.value {
                    failures.push(format!("scaling w={w} x={x} N={n}"));
                }
                let up = sigma_yy(w, &FieldPoint::new(x, 13.5, &unit())?, &unit(), &policy)?;
                let down = sigma_yy(w, &FieldPoint::new(x, -13.5, &unit())?, &unit(), &policy)?;
                if up.value != down.value {
                    failures.push(format!("parity w={w} x={x} N={n}"));
                }
            }
        }
    }
    let detail = if failures.is_empty() {
        "mirror, positivity, scaling and parity hold on 288 samples".to_string()
    } else {
        format!("violations: {}", failures.join("; "))
    };
    Ok((failures.is_empty(), detail))
}

fn derivative_route() -> Result<(bool, String)> {
    let policy = TruncationPolicy::new(200);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut i = 0u32;
    while count < 20 {
        i += 1;
        // low-discrepancy sample stream
        let frac = |m: f64| (i as f64 * m).fract();
        let s = 0.05 + 2.5 * frac(0.618_033_988_749_895);
        let x = 0.02 + 0.96 * frac(0.754_877_666_246_693);
        let y = 0.1 + 2.0 * frac(0.569_840_290_998_053);
        let p = FieldPoint::new(x, y, &unit())?;
        let clear = (-200i64..=200).all(|n| {
            let d = image_distances(n, &p, &unit());
            (s - d.a).abs() > 0.15 && (s - d.b).abs() > 0.15
        });
        if !clear {
            continue;
        }
        count += 1;
        let closed = two_point_yy_closed(s, &p, &unit(), &policy)?;
        let fd = two_point_yy_by_derivative(s, &p, &unit(), &policy, 1e-3)?;
        worst = worst.max((fd - closed).abs() / closed.abs());
    }
    Ok((worst <= 1e-4, format!("max relative deviation {worst:.3e} at 20 samples, h = 1e-3")))
}

fn detector() -> Result<(bool, String)> {
    let g = unit();
    let policy = TruncationPolicy::new(200);
    let quad = QuadratureSpec::default();
    let config = DetectorConfig::new(FieldPoint::new(0.6, 0.0, &g)?, FieldPoint::new(0.6, 7.0, &g)?, 0.8, &g)?;
    let v1 = variance_current(&config, &LoKernel::new(2.3 * PI, 0.05, 0.9)?, &g, &policy, &quad)?;
    let v2 = variance_current(&config, &LoKernel::new(2.3 * PI, 0.05, 1.8)?, &g, &policy, &quad)?;
    let quadratic = (v2 / v1 - 4.0).abs() / 4.0;

    let p = PI / 50.0;
    let mode = LoMode::te1(p, (4.0 * PI * PI - PI * PI - p * p).sqrt(), &g)?;
    let balanced = DetectorConfig::new(FieldPoint::new(0.75, 0.0, &g)?, FieldPoint::new(0.75, 50.0, &g)?, 1.0, &g)?;
    let residual = check_balance(&balanced, &mode, 1e-9, &g)?.residual;
    let kernel = LoKernel::new(mode.omega, mode.omega / 100.0, 1.0)?;
    let field = ClassicalField::from_lo_mode(&mode, &balanced, 1.0, &g)?;
    let mean = mean_current(&balanced, &kernel, Some(&field))?;
    let scale = kernel.amplitude * field.components[0].amplitude_diode1.abs();
    let ok = quadratic <= 1e-12 && residual <= 1e-12 && mean.abs() <= 1e-12 * scale;
    Ok((
        ok,
        format!("amplitude doubling x{:.15}; balance residual {residual:e}; balanced mean {mean:e}", v2 / v1),
    ))
}

pub fn run(ctx: &Context, args: &ValidateArgs) -> std::result::Result<(), CliError> {
    let mut checks = vec![
        check("vacuum-diagonal", vacuum_diagonal()),
        check("vacuum-embedding", vacuum_embedding()),
        check("boundary-zeros", boundary_zeros()),
        check("sub-cutoff", sub_cutoff()),
        check("convergence-report", convergence()),
        check("invariants", invariants()),
        check("derivative-route", derivative_route()),
        check("detector", detector()),
    ];
    if !args.skip_oracle {
        checks.push(check("oracle-vacuum", oracle_vacuum_calibration()));
        checks.push(check("oracle-agreement", oracle_agreement()));
    }

    let failed = checks.iter().filter(|c| !c.passed).count();
    let text = match ctx.format {
        Format::Csv => {
            let mut s = String::new();
            for c in &checks {
                s.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
            }
            s
        }
        Format::Json => {
            let list: Vec<_> = checks
                .iter()
                .map(|c| json!({ "check": c.name, "passed": c.passed, "detail": c.detail }))
                .collect();
            let mut s = serde_json::to_string_pretty(&json!({ "command": "validate", "checks": list }))
                .expect("JSON values are serializable");
            s.push('\n');
            s
        }
    };
    write_text(ctx.output.as_deref(), &text)?;
    if failed > 0 {
        return Err(CliError::ValidationFailed(failed));
    }
    Ok(())
}
